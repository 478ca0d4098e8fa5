#include "squirrel/de.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "squirrel/errors.hpp"

namespace squirrel {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kPopulation = 8;
} // namespace

bool DeState::fully_evaluated() const {
  return std::all_of(evaluated_.begin(), evaluated_.end(),
                     [](bool b) { return b; });
}

std::size_t DeState::best_index() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] < values_[best]) {
      best = i;
    }
  }
  return best;
}

DeState de_init_from_history(const History &history, Rng &rng) {
  auto inc = history.incumbent();
  if (!inc) {
    throw std::invalid_argument(
        "de_init_from_history: history needs at least one finite trial");
  }
  const auto &trials = history.trials();

  DeState state;
  state.population_.push_back(trials[inc->trial_index].u);
  state.values_.push_back(inc->y);
  state.evaluated_.push_back(true);

  const std::size_t others = trials.size() - 1;
  const std::size_t needed = kPopulation - 1;
  if (others >= needed) {
    auto picks = rng.sample_distinct(trials.size(), needed, {inc->trial_index});
    for (std::size_t idx : picks) {
      state.population_.push_back(trials[idx].u);
      state.values_.push_back(trials[idx].y);
      state.evaluated_.push_back(true);
    }
  } else if (others >= 1) {
    // Too few distinct donors: draw with replacement from the others.
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < trials.size(); ++i) {
      if (i != inc->trial_index) {
        pool.push_back(i);
      }
    }
    for (std::size_t k = 0; k < needed; ++k) {
      std::size_t idx = pool[rng.next_index(pool.size())];
      state.population_.push_back(trials[idx].u);
      state.values_.push_back(trials[idx].y);
      state.evaluated_.push_back(true);
    }
  } else {
    // Single-trial history: fill with fresh random members, unevaluated
    // until the next observe.
    const std::size_t d = trials[0].u.size();
    for (std::size_t k = 0; k < needed; ++k) {
      UnitVector u(d);
      for (auto &coord : u) {
        coord = rng.next_double();
      }
      state.population_.push_back(std::move(u));
      state.values_.push_back(kInf);
      state.evaluated_.push_back(false);
    }
  }
  return state;
}

std::pair<DeState, std::vector<Configuration>>
de_init_random(const ConfigSpace &space, Rng &rng) {
  DeState state;
  std::vector<Configuration> batch;
  for (int i = 0; i < kPopulation; ++i) {
    UnitVector u(space.dimension());
    for (auto &coord : u) {
      coord = rng.next_double();
    }
    batch.push_back(decode(space, u));
    state.population_.push_back(std::move(u));
    state.values_.push_back(kInf);
    state.evaluated_.push_back(false);
  }
  state.pending_ = DeState::Pending::init;
  state.pending_x_ = state.population_;
  return {std::move(state), std::move(batch)};
}

double sinusoidal_f(int g, int g_max, double freq) {
  if (g_max < 1 || g < 0 || g > g_max) {
    throw std::invalid_argument("sinusoidal_f: need 0 <= g <= g_max, g_max >= 1");
  }
  double envelope = static_cast<double>(g_max - g) / static_cast<double>(g_max);
  double f = 0.5 * (std::sin(2.0 * std::numbers::pi * freq *
                                 static_cast<double>(g) +
                             std::numbers::pi) *
                        envelope +
                    1.0);
  return std::clamp(f, 0.05, 1.0);
}

std::vector<UnitVector> de_mutate_best2(const DeState &state, double f,
                                        Rng &rng) {
  const std::size_t np = state.population().size();
  if (np < 5) {
    throw std::invalid_argument(
        "de_mutate_best2: best/2 needs a population of at least 5");
  }
  if (!state.fully_evaluated()) {
    throw ProtocolError("de_mutate_best2: population not fully evaluated");
  }
  const UnitVector &best = state.population()[state.best_index()];
  const std::size_t d = best.size();

  std::vector<UnitVector> mutants;
  mutants.reserve(np);
  for (std::size_t i = 0; i < np; ++i) {
    auto donors = rng.sample_distinct(np, 4, {i});
    const UnitVector &r1 = state.population()[donors[0]];
    const UnitVector &r2 = state.population()[donors[1]];
    const UnitVector &r3 = state.population()[donors[2]];
    const UnitVector &r4 = state.population()[donors[3]];

    UnitVector v(d);
    for (std::size_t j = 0; j < d; ++j) {
      double value = best[j] + f * (r1[j] - r2[j]) + f * (r3[j] - r4[j]);
      // One reflection, then clamp.
      if (value < 0.0) {
        value = -value;
      } else if (value > 1.0) {
        value = 2.0 - value;
      }
      v[j] = std::clamp(value, 0.0, 1.0);
    }
    mutants.push_back(std::move(v));
  }
  return mutants;
}

UnitVector de_crossover(const UnitVector &parent, const UnitVector &mutant,
                        Rng &rng, double cr_mean, double cr_var) {
  if (parent.size() != mutant.size()) {
    throw std::invalid_argument("de_crossover: dimension mismatch");
  }
  const std::size_t d = parent.size();
  double cr =
      std::clamp(cr_mean + std::sqrt(cr_var) * rng.next_normal(), 0.0, 1.0);
  std::size_t j_rand = rng.next_index(d);
  UnitVector offspring(d);
  for (std::size_t j = 0; j < d; ++j) {
    offspring[j] =
        (rng.next_double() < cr || j == j_rand) ? mutant[j] : parent[j];
  }
  return offspring;
}

std::vector<Configuration> de_propose_batch(DeState &state,
                                            const DeParams &params,
                                            const ConfigSpace &space,
                                            Rng &rng) {
  if (state.pending_ != DeState::Pending::none) {
    throw ProtocolError(
        "de_propose_batch: previous batch has not been observed");
  }

  if (!state.fully_evaluated()) {
    // Initial evaluations outstanding: the batch is the population itself.
    state.pending_ = DeState::Pending::init;
    state.pending_x_ = state.population_;
    std::vector<Configuration> batch;
    batch.reserve(state.population_.size());
    for (const auto &u : state.population_) {
      batch.push_back(decode(space, u));
    }
    return batch;
  }

  double f = sinusoidal_f(std::min(state.generation_, params.g_max),
                          params.g_max, params.freq);
  std::vector<UnitVector> mutants = de_mutate_best2(state, f, rng);

  state.pending_x_.clear();
  std::vector<Configuration> batch;
  batch.reserve(mutants.size());
  for (std::size_t i = 0; i < mutants.size(); ++i) {
    UnitVector offspring = de_crossover(state.population_[i], mutants[i], rng,
                                        params.cr_mean, params.cr_var);
    batch.push_back(decode(space, offspring));
    state.pending_x_.push_back(std::move(offspring));
  }
  state.pending_ = DeState::Pending::offspring;
  return batch;
}

void de_select(DeState &state, const std::vector<double> &offspring_values) {
  if (state.pending_ == DeState::Pending::none) {
    throw ProtocolError("de_select: no batch is pending");
  }
  if (offspring_values.size() != state.pending_x_.size()) {
    throw ProtocolError("de_select: got " +
                        std::to_string(offspring_values.size()) +
                        " values for " +
                        std::to_string(state.pending_x_.size()) +
                        " pending offspring");
  }

  if (state.pending_ == DeState::Pending::init) {
    for (std::size_t i = 0; i < offspring_values.size(); ++i) {
      state.values_[i] = offspring_values[i];
      state.evaluated_[i] = true;
    }
  } else {
    // Truncation selection; ties accept the offspring.
    for (std::size_t i = 0; i < offspring_values.size(); ++i) {
      if (offspring_values[i] <= state.values_[i]) {
        state.population_[i] = state.pending_x_[i];
        state.values_[i] = offspring_values[i];
      }
    }
    state.generation_ += 1;
  }
  state.pending_ = DeState::Pending::none;
  state.pending_x_.clear();
}

} // namespace squirrel

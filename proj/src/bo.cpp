#include "squirrel/bo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "squirrel/errors.hpp"
#include "squirrel/parallel.hpp"

namespace squirrel {

using nlohmann::json;

Portfolio default_portfolio() {
  return {
      {SurrogateKind::gp, {AcqType::ei}, TransformKind::identity},
      {SurrogateKind::gp, {AcqType::pi}, TransformKind::identity},
      {SurrogateKind::gp, {AcqType::lcb, 2.0}, TransformKind::identity},
      {SurrogateKind::gp, {AcqType::ei}, TransformKind::copula},
      {SurrogateKind::gp, {AcqType::log_ei}, TransformKind::log},
      {SurrogateKind::rf, {AcqType::ei}, TransformKind::identity},
      {SurrogateKind::rf, {AcqType::log_ei}, TransformKind::log},
      {SurrogateKind::rf, {AcqType::ei}, TransformKind::copula},
  };
}

std::string portfolio_to_string(const Portfolio &portfolio) {
  std::string out;
  for (std::size_t i = 0; i < portfolio.size(); ++i) {
    if (i) {
      out += ',';
    }
    out += to_string(portfolio[i].surrogate);
    out += '+';
    out += to_string(portfolio[i].acquisition.type);
    out += '+';
    out += to_string(portfolio[i].transform);
  }
  return out;
}

Portfolio portfolio_from_json(const std::string &json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception &e) {
    throw ConfigError(std::string("portfolio file is not valid JSON: ") +
                      e.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw ConfigError("portfolio file must be a non-empty JSON array");
  }
  Portfolio portfolio;
  for (const auto &item : doc) {
    if (!item.is_object()) {
      throw ConfigError("portfolio entries must be objects");
    }
    for (auto it = item.begin(); it != item.end(); ++it) {
      if (it.key() != "surrogate" && it.key() != "acquisition" &&
          it.key() != "transform" && it.key() != "kappa") {
        throw ConfigError("portfolio entry has unknown key \"" + it.key() +
                          "\"");
      }
    }
    Triplet t;
    t.surrogate =
        surrogate_kind_from_string(item.value("surrogate", std::string{}));
    t.acquisition.type =
        acq_type_from_string(item.value("acquisition", std::string{}));
    t.transform =
        transform_kind_from_string(item.value("transform", std::string{}));
    if (item.contains("kappa")) {
      if (!item["kappa"].is_number() || item["kappa"].get<double>() <= 0.0) {
        throw ConfigError("portfolio entry kappa must be a positive number");
      }
      t.acquisition.kappa = item["kappa"].get<double>();
    }
    portfolio.push_back(t);
  }
  validate_portfolio(portfolio);
  return portfolio;
}

void validate_portfolio(const Portfolio &portfolio) {
  if (portfolio.empty()) {
    throw ConfigError("portfolio must not be empty");
  }
  for (const Triplet &t : portfolio) {
    if (t.acquisition.type == AcqType::log_ei &&
        t.transform != TransformKind::log) {
      throw ConfigError("log_ei requires the log transform (got '" +
                        std::string(to_string(t.transform)) + "')");
    }
  }
}

double fantasize(const SurrogateModel &model,
                 const TransformState &transform_state, const UnitVector &u) {
  return invert_transform(transform_state, model.predict(u).first);
}

namespace {

double linf_distance(const UnitVector &a, const UnitVector &b) {
  double dist = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dist = std::max(dist, std::abs(a[i] - b[i]));
  }
  return dist;
}

UnitVector random_unit(std::size_t d, Rng &rng) {
  UnitVector u(d);
  for (auto &coord : u) {
    coord = rng.next_double();
  }
  return u;
}

} // namespace

UnitVector optimize_acq(const SurrogateModel &model,
                        const TransformState &transform_state,
                        const AcqKind &acquisition, double f_best,
                        const ConfigSpace &space, Rng &rng,
                        const BoOptions &options) {
  (void)transform_state; // the state is baked into f_best for log_ei
  const std::size_t d = space.dimension();

  auto score = [&](const UnitVector &u) {
    auto [mean, var] = model.predict(u);
    return acq_score(acquisition, mean, var, f_best);
  };

  // Candidate block: uniform random points, generated serially so the rng
  // consumption order never depends on the thread count.
  const auto n_random = static_cast<std::size_t>(options.random_candidates);
  std::vector<UnitVector> candidates(n_random);
  for (auto &c : candidates) {
    c = random_unit(d, rng);
  }
  std::vector<double> candidate_scores(n_random);
  parallel::for_each_index(n_random, [&](std::size_t i) {
    candidate_scores[i] = score(candidates[i]);
  });

  // Local-search chains start from the best training points by transformed
  // target (stable order), or random points when fewer exist.
  const auto &train_x = model.train_x();
  const auto &train_z = model.train_z();
  std::vector<std::size_t> best_train(train_x.size());
  std::iota(best_train.begin(), best_train.end(), 0);
  std::stable_sort(best_train.begin(), best_train.end(),
                   [&](std::size_t a, std::size_t b) {
                     return train_z[a] < train_z[b];
                   });
  const std::size_t n_best = std::min<std::size_t>(5, best_train.size());

  const auto n_chains = static_cast<std::size_t>(options.local_chains);
  std::vector<Rng> chain_rngs;
  chain_rngs.reserve(n_chains);
  for (std::size_t c = 0; c < n_chains; ++c) {
    chain_rngs.push_back(rng.fork());
  }

  const auto steps = static_cast<std::size_t>(options.chain_steps);
  std::vector<std::vector<UnitVector>> chain_points(n_chains);
  std::vector<std::vector<double>> chain_scores(n_chains);

  parallel::for_each_index(n_chains, [&](std::size_t c) {
    Rng &chain_rng = chain_rngs[c];
    UnitVector current = (n_best > 0 && c % 5 < n_best)
                             ? train_x[best_train[c % 5]]
                             : random_unit(d, chain_rng);
    double current_score = score(current);
    chain_points[c].push_back(current);
    chain_scores[c].push_back(current_score);
    for (std::size_t step = 0; step < steps; ++step) {
      UnitVector next = current;
      for (std::size_t j = 0; j < d; ++j) {
        next[j] = std::clamp(
            next[j] + options.chain_sigma * chain_rng.next_normal(), 0.0, 1.0);
      }
      double next_score = score(next);
      chain_points[c].push_back(next);
      chain_scores[c].push_back(next_score);
      if (next_score > current_score) {
        current = std::move(next);
        current_score = next_score;
      }
    }
  });

  // Fixed-order argmax over everything evaluated: random block first, then
  // chains in order; strict improvement only, so the earliest candidate
  // wins ties regardless of thread count.
  const UnitVector *best_point = nullptr;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_random; ++i) {
    if (best_point == nullptr || candidate_scores[i] > best_score) {
      best_score = candidate_scores[i];
      best_point = &candidates[i];
    }
  }
  for (std::size_t c = 0; c < n_chains; ++c) {
    for (std::size_t i = 0; i < chain_points[c].size(); ++i) {
      if (best_point == nullptr || chain_scores[c][i] > best_score) {
        best_score = chain_scores[c][i];
        best_point = &chain_points[c][i];
      }
    }
  }
  if (best_point == nullptr) {
    return random_unit(d, rng);
  }
  return *best_point;
}

std::vector<Configuration> propose_batch_bo(const History &history,
                                            const ConfigSpace &space,
                                            const Portfolio &portfolio,
                                            Rng &rng,
                                            const BoOptions &options) {
  validate_portfolio(portfolio);
  if (history.distinct_finite_values() < 2) {
    throw std::invalid_argument(
        "propose_batch_bo: need at least 2 trials with distinct finite "
        "objectives");
  }

  Design design = history.design_matrix();
  const std::size_t n_real = design.x.size();
  const std::size_t d = space.dimension();

  std::vector<std::size_t> order(portfolio.size());
  std::iota(order.begin(), order.end(), 0);
  if (options.shuffle_triplets) {
    rng.shuffle(order);
  }

  // Fit set = real trials plus believer fantasies appended as the batch
  // fills; fantasies never leave this function.
  std::vector<UnitVector> fit_x = std::move(design.x);
  std::vector<double> fit_y = std::move(design.y);

  std::vector<UnitVector> proposal_us;
  std::vector<Configuration> proposals;
  proposal_us.reserve(static_cast<std::size_t>(options.batch_size));

  auto collides = [&](const UnitVector &u) {
    for (std::size_t i = 0; i < n_real; ++i) {
      if (linf_distance(u, fit_x[i]) <= options.duplicate_tol) {
        return true;
      }
    }
    for (const auto &p : proposal_us) {
      if (linf_distance(u, p) <= options.duplicate_tol) {
        return true;
      }
    }
    return false;
  };

  for (int k = 0; k < options.batch_size; ++k) {
    const Triplet &triplet = portfolio[order[static_cast<std::size_t>(k) %
                                             order.size()]];
    Rng fit_rng = rng.fork();
    Rng acq_rng = rng.fork();

    UnitVector u;
    double fantasy_value;
    try {
      TransformResult tr = apply_transform(triplet.transform, fit_y);
      SurrogateModel model =
          SurrogateModel::fit(triplet.surrogate, fit_x, tr.z, fit_rng,
                              options.gp, options.rf);

      // Improvement target: best target the model believes, fantasies
      // included. A believer value below the real incumbent must lower the
      // bar, otherwise the acquisition stays peaked on the believed point
      // and the batch collapses there.
      double f_best;
      if (triplet.acquisition.type == AcqType::log_ei) {
        double raw_best = *std::min_element(fit_y.begin(), fit_y.end());
        f_best = tr.state.shifted(raw_best);
      } else {
        f_best = *std::min_element(tr.z.begin(), tr.z.end());
      }

      u = optimize_acq(model, tr.state, triplet.acquisition, f_best, space,
                       acq_rng, options);
      while (collides(u)) {
        u = random_unit(d, rng);
      }
      fantasy_value = fantasize(model, tr.state, u);
    } catch (const std::exception &) {
      // Surrogate fit failure: keep the hard batch-size contract with a
      // random proposal and a neutral believer value.
      u = random_unit(d, rng);
      while (collides(u)) {
        u = random_unit(d, rng);
      }
      fantasy_value =
          std::accumulate(fit_y.begin(), fit_y.end(), 0.0) /
          static_cast<double>(fit_y.size());
    }

    proposal_us.push_back(u);
    proposals.push_back(decode(space, u));
    fit_x.push_back(std::move(u));
    fit_y.push_back(fantasy_value);
  }
  return proposals;
}

} // namespace squirrel

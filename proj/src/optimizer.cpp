#include "squirrel/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>

#include "squirrel/errors.hpp"

namespace squirrel {

const char *to_string(Stage stage) {
  switch (stage) {
  case Stage::init_warmstart:
    return "init_warmstart";
  case Stage::init_de:
    return "init_de";
  case Stage::bo:
    return "bo";
  case Stage::de_final:
    return "de_final";
  }
  return "?";
}

Stage stage_for_batch(int batch_index, bool warmstart_matched) {
  if (batch_index < 0 || batch_index > 15) {
    throw ProtocolError("stage_for_batch: batch index " +
                        std::to_string(batch_index) + " outside 0..15");
  }
  if (batch_index <= 2) {
    return warmstart_matched ? Stage::init_warmstart : Stage::init_de;
  }
  if (batch_index <= 10) {
    return Stage::bo;
  }
  return Stage::de_final;
}

Optimizer::Optimizer(ConfigSpace space, std::uint64_t seed,
                     OptimizerOptions options)
    : space_(std::move(space)), options_(std::move(options)),
      history_(space_),
      rng_warmstart_(derive_seed(seed, "warmstart")),
      rng_de_init_(derive_seed(seed, "de_init")),
      rng_bo_(derive_seed(seed, "bo")),
      rng_de_final_(derive_seed(seed, "de_final")) {
  validate_portfolio(options_.portfolio);
  if (options_.registry) {
    auto design = initial_design(*options_.registry, space_, rng_warmstart_);
    if (design) {
      warmstart_matched_ = true;
      init_queue_ = std::move(*design);
      // Non-default batch shapes may need more than the 24 design points.
      std::size_t needed = static_cast<std::size_t>(options_.init_batches) *
                           static_cast<std::size_t>(options_.batch_size);
      while (init_queue_.size() < needed) {
        init_queue_.push_back(sample_random(space_, rng_warmstart_));
      }
    }
  }
}

Stage Optimizer::current_stage() const {
  int b = std::min(batch_index_, options_.total_batches() - 1);
  if (b < options_.init_batches) {
    return warmstart_matched_ ? Stage::init_warmstart : Stage::init_de;
  }
  if (b < options_.init_batches + options_.bo_batches) {
    return Stage::bo;
  }
  return Stage::de_final;
}

std::vector<Configuration> Optimizer::random_batch(Rng &rng) {
  std::vector<Configuration> batch;
  std::vector<UnitVector> us;
  while (batch.size() < static_cast<std::size_t>(options_.batch_size)) {
    UnitVector u(space_.dimension());
    for (auto &coord : u) {
      coord = rng.next_double();
    }
    bool dup = false;
    for (const auto &prev : us) {
      double dist = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) {
        dist = std::max(dist, std::abs(u[j] - prev[j]));
      }
      if (dist <= options_.bo.duplicate_tol) {
        dup = true;
        break;
      }
    }
    if (dup) {
      continue;
    }
    batch.push_back(decode(space_, u));
    us.push_back(std::move(u));
  }
  return batch;
}

std::vector<Configuration> Optimizer::suggest_init() {
  if (warmstart_matched_) {
    auto first = init_queue_.begin() +
                 static_cast<std::ptrdiff_t>(batch_index_ * options_.batch_size);
    return {first, first + options_.batch_size};
  }
  if (batch_index_ == 0) {
    auto [state, batch] = de_init_random(space_, rng_de_init_);
    de_init_state_ = std::move(state);
    return batch;
  }
  DeParams params;
  params.population_size = options_.batch_size;
  params.freq = options_.de_freq;
  params.cr_mean = options_.de_cr_mean;
  params.cr_var = options_.de_cr_var;
  params.g_max = std::max(1, options_.init_batches - 1);
  return de_propose_batch(*de_init_state_, params, space_, rng_de_init_);
}

std::vector<Configuration> Optimizer::suggest_bo() {
  // Pathological histories (constant objective so far) cannot anchor a
  // surrogate; fall back to random for this batch.
  if (history_.distinct_finite_values() < 2) {
    return random_batch(rng_bo_);
  }
  return propose_batch_bo(history_, space_, options_.portfolio, rng_bo_,
                          options_.bo);
}

std::vector<Configuration> Optimizer::suggest_de_final() {
  if (!de_final_state_) {
    if (!history_.incumbent()) {
      // 88 failed evaluations in a row: nothing to seed DE with.
      return random_batch(rng_de_final_);
    }
    de_final_state_ = de_init_from_history(history_, rng_de_final_);
  }
  DeParams params;
  params.population_size = options_.batch_size;
  params.freq = options_.de_freq;
  params.cr_mean = options_.de_cr_mean;
  params.cr_var = options_.de_cr_var;
  params.g_max = options_.final_batches;
  return de_propose_batch(*de_final_state_, params, space_, rng_de_final_);
}

std::vector<Configuration> Optimizer::suggest() {
  if (outstanding_) {
    throw ProtocolError("suggest: previous batch has not been observed");
  }
  if (finished()) {
    throw ProtocolError("suggest: run exhausted after " +
                        std::to_string(options_.total_batches()) + " batches");
  }

  std::vector<Configuration> batch;
  switch (current_stage()) {
  case Stage::init_warmstart:
  case Stage::init_de:
    batch = suggest_init();
    break;
  case Stage::bo:
    batch = suggest_bo();
    break;
  case Stage::de_final:
    batch = suggest_de_final();
    break;
  }

  if (batch.size() != static_cast<std::size_t>(options_.batch_size)) {
    throw ProtocolError("suggest: stage produced " +
                        std::to_string(batch.size()) + " configurations");
  }

  Outstanding out;
  out.configs = batch;
  out.us.reserve(batch.size());
  for (const auto &config : batch) {
    out.us.push_back(encode(space_, config));
  }
  outstanding_ = std::move(out);
  return batch;
}

void Optimizer::observe(const std::vector<Configuration> &configs,
                        const std::vector<double> &values) {
  if (!outstanding_) {
    throw ProtocolError("observe: no suggestion outstanding");
  }
  if (configs.size() != outstanding_->configs.size() ||
      values.size() != configs.size()) {
    throw ProtocolError("observe: expected " +
                        std::to_string(outstanding_->configs.size()) +
                        " configurations with values, got " +
                        std::to_string(configs.size()) + "/" +
                        std::to_string(values.size()));
  }

  // Match observations to suggestion slots by unit vector (order
  // insensitive); trials are then recorded in suggestion order.
  const std::size_t n = configs.size();
  std::vector<double> slot_values(n);
  std::vector<bool> slot_taken(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    UnitVector u = encode(space_, configs[i]);
    bool placed = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (slot_taken[j]) {
        continue;
      }
      double dist = 0.0;
      for (std::size_t k = 0; k < u.size(); ++k) {
        dist = std::max(dist, std::abs(u[k] - outstanding_->us[j][k]));
      }
      if (dist <= 1e-9) {
        slot_taken[j] = true;
        slot_values[j] = values[i];
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw ProtocolError(
          "observe: configuration " + std::to_string(i) +
          " does not match any outstanding suggestion");
    }
  }

  Stage stage = current_stage();
  StageTag tag = StageTag::bo;
  switch (stage) {
  case Stage::init_warmstart:
    tag = StageTag::warmstart;
    break;
  case Stage::init_de:
    tag = StageTag::de_init;
    break;
  case Stage::bo:
    tag = StageTag::bo;
    break;
  case Stage::de_final:
    tag = StageTag::de_final;
    break;
  }

  for (std::size_t j = 0; j < n; ++j) {
    double y = std::isnan(slot_values[j])
                   ? std::numeric_limits<double>::infinity()
                   : slot_values[j];
    slot_values[j] = y;
    history_.record(outstanding_->configs[j], y, batch_index_, tag);
  }

  if (stage == Stage::init_de && de_init_state_) {
    de_select(*de_init_state_, slot_values);
  } else if (stage == Stage::de_final && de_final_state_) {
    de_select(*de_final_state_, slot_values);
  }

  outstanding_.reset();
  batch_index_ += 1;
}

void Optimizer::resume_from_csv(std::istream &history_csv) {
  if (batch_index_ != 0 || outstanding_) {
    throw ProtocolError("resume_from_csv: optimizer already advanced");
  }
  History recorded = History::from_csv(space_, history_csv);
  if (recorded.size() % static_cast<std::size_t>(options_.batch_size) != 0) {
    throw ConfigError("resume_from_csv: trial count is not a whole number of "
                      "batches");
  }
  std::size_t batches = recorded.size() /
                        static_cast<std::size_t>(options_.batch_size);
  for (std::size_t b = 0; b < batches; ++b) {
    std::vector<Configuration> configs;
    std::vector<double> values;
    for (int i = 0; i < options_.batch_size; ++i) {
      const Trial &t =
          recorded.trials()[b * static_cast<std::size_t>(options_.batch_size) +
                            static_cast<std::size_t>(i)];
      configs.push_back(t.config);
      values.push_back(t.y);
    }
    suggest(); // deterministic; observe() verifies the recorded configs match
    observe(configs, values);
  }
}

} // namespace squirrel

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "squirrel/bo.hpp"
#include "squirrel/de.hpp"
#include "squirrel/history.hpp"
#include "squirrel/space.hpp"
#include "squirrel/warmstart.hpp"

namespace squirrel {

enum class Stage { init_warmstart, init_de, bo, de_final };

const char *to_string(Stage stage);

/// Fixed 3/8/5 schedule over the 16 batches: batches 0-2 run the initial
/// design (warmstart when the registry matched, DE otherwise), 3-10 run
/// portfolio BO, 11-15 run the final DE stage.
Stage stage_for_batch(int batch_index, bool warmstart_matched);

struct OptimizerOptions {
  std::optional<Registry> registry;
  Portfolio portfolio = default_portfolio();
  BoOptions bo;
  double de_freq = 0.25;
  double de_cr_mean = 0.5;
  double de_cr_var = 0.01;
  int init_batches = 3;
  int bo_batches = 8;
  int final_batches = 5;
  int batch_size = 8;

  int total_batches() const { return init_batches + bo_batches + final_batches; }
};

/// The switching controller. suggest() and observe() strictly alternate;
/// batch_index advances on observe. One instance is one logical thread of
/// control; independent instances may run concurrently.
class Optimizer {
public:
  Optimizer(ConfigSpace space, std::uint64_t seed,
            OptimizerOptions options = {});

  /// Exactly batch_size configurations for the current batch.
  std::vector<Configuration> suggest();

  /// Report objective values. configs must match the outstanding suggestion
  /// (order-insensitive, matched by unit vector); NaN values are recorded
  /// as +inf. Trials land in suggestion order.
  void observe(const std::vector<Configuration> &configs,
               const std::vector<double> &values);

  const History &history() const { return history_; }
  const ConfigSpace &space() const { return space_; }
  int batch_index() const { return batch_index_; }
  bool warmstart_matched() const { return warmstart_matched_; }
  bool suggestion_outstanding() const { return outstanding_.has_value(); }
  Stage current_stage() const;
  bool finished() const {
    return batch_index_ >= options_.total_batches();
  }

  /// Replay a previously exported history CSV through the deterministic
  /// suggestion stream. Errors if the recorded configurations diverge from
  /// what this optimizer (same space/seed/registry) would have suggested.
  void resume_from_csv(std::istream &history_csv);

private:
  struct Outstanding {
    std::vector<Configuration> configs;
    std::vector<UnitVector> us;
  };

  std::vector<Configuration> suggest_init();
  std::vector<Configuration> suggest_bo();
  std::vector<Configuration> suggest_de_final();
  std::vector<Configuration> random_batch(Rng &rng);

  ConfigSpace space_;
  OptimizerOptions options_;
  History history_;
  bool warmstart_matched_ = false;
  std::vector<Configuration> init_queue_; // 24 configs when warmstarted
  int batch_index_ = 0;
  std::optional<Outstanding> outstanding_;

  Rng rng_warmstart_;
  Rng rng_de_init_;
  Rng rng_bo_;
  Rng rng_de_final_;

  std::optional<DeState> de_init_state_;
  std::optional<DeState> de_final_state_;
};

} // namespace squirrel

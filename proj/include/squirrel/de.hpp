#pragma once

#include <utility>
#include <vector>

#include "squirrel/history.hpp"
#include "squirrel/rng.hpp"
#include "squirrel/space.hpp"

namespace squirrel {

struct DeParams {
  int population_size = 8; // equals the batch size
  double freq = 0.25;      // sinusoidal adaptation frequency
  int g_max = 1;           // generations in the current phase
  double cr_mean = 0.5;
  double cr_var = 0.01; // variance (stddev 0.1)
};

/// Differential-evolution population over unit vectors. Population values
/// are always real evaluated objectives, never fantasies. propose/observe
/// strictly alternate via the pending set.
class DeState {
public:
  enum class Pending { none, init, offspring };

  const std::vector<UnitVector> &population() const { return population_; }
  const std::vector<double> &values() const { return values_; }
  int generation() const { return generation_; }
  Pending pending() const { return pending_; }
  const std::vector<UnitVector> &pending_vectors() const { return pending_x_; }

  /// All members carry an evaluated objective value.
  bool fully_evaluated() const;

  /// Index of the best member (lowest value, earliest on ties).
  std::size_t best_index() const;

  friend DeState de_init_from_history(const History &history, Rng &rng);
  friend std::pair<DeState, std::vector<Configuration>>
  de_init_random(const ConfigSpace &space, Rng &rng);
  friend std::vector<Configuration> de_propose_batch(DeState &state,
                                                     const DeParams &params,
                                                     const ConfigSpace &space,
                                                     Rng &rng);
  friend void de_select(DeState &state,
                        const std::vector<double> &offspring_values);

private:
  std::vector<UnitVector> population_;
  std::vector<double> values_; // +inf marks an unevaluated member
  std::vector<bool> evaluated_;
  int generation_ = 0;
  Pending pending_ = Pending::none;
  std::vector<UnitVector> pending_x_;
};

/// Seed the population from past trials: member 0 is the incumbent, the
/// rest are drawn from the remaining evaluated trials (without replacement
/// while enough exist, with replacement otherwise, fresh random vectors
/// only when the history holds a single trial).
DeState de_init_from_history(const History &history, Rng &rng);

/// Random initial population; the returned batch IS the population, and its
/// observed values become the generation-0 values.
std::pair<DeState, std::vector<Configuration>>
de_init_random(const ConfigSpace &space, Rng &rng);

/// Decreasing sinusoidal scaling factor, clamped to [0.05, 1].
double sinusoidal_f(int g, int g_max, double freq);

/// best/2 mutation with one reflection then clamp at the cube boundary.
std::vector<UnitVector> de_mutate_best2(const DeState &state, double f,
                                        Rng &rng);

/// Binomial crossover; CR ~ N(cr_mean, cr_var) clipped to [0,1], with the
/// j_rand coordinate always taken from the mutant.
UnitVector de_crossover(const UnitVector &parent, const UnitVector &mutant,
                        Rng &rng, double cr_mean = 0.5, double cr_var = 0.01);

/// One generation of proposals: mutate every member, cross over, store as
/// pending. When the population is not yet evaluated the batch is the
/// population itself.
std::vector<Configuration> de_propose_batch(DeState &state,
                                            const DeParams &params,
                                            const ConfigSpace &space,
                                            Rng &rng);

/// Truncation selection (ties accept the offspring); increments the
/// generation. For an init-pending state this records the first evaluations
/// instead.
void de_select(DeState &state, const std::vector<double> &offspring_values);

} // namespace squirrel

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "squirrel/optimizer.hpp"
#include "squirrel/space.hpp"

namespace squirrel {

/// Deterministic synthetic objective with a typed search space.
struct FuncSpec {
  std::string name;
  ConfigSpace space;
  std::function<double(const Configuration &)> evaluate;
  std::optional<double> known_optimum;
};

/// The built-in benchmark set: sphere-10d, branin-2d, rosenbrock-5d,
/// ackley-5d, and a mixed space exercising every parameter kind.
std::vector<FuncSpec> builtin_functions();
const FuncSpec &builtin_function(const std::string &name);

struct RunResult {
  std::string function;
  std::string optimizer; // "squirrel" or "random"
  std::uint64_t seed = 0;
  std::vector<double> best_per_batch; // best-so-far after each batch
  double final_best = 0.0;
  double wall_seconds = 0.0; // excluded from the CSV
};

/// Drive full 16-round runs for every (function, seed) pair. Runs are
/// paired by seed across optimizers and embarrassingly parallel; results
/// come back in (function, seed) task order regardless of thread count.
/// Objective exceptions are recorded as +inf trials.
std::vector<RunResult>
run_experiment(const std::string &optimizer_kind,
               const std::vector<FuncSpec> &functions,
               const std::vector<std::uint64_t> &seeds,
               const std::optional<std::string> &registry_path = {});

/// One row per (function, optimizer, seed, batch) with the best-so-far
/// value; wall time never enters the file, so identical seeds give
/// byte-identical output.
void write_results_csv(const std::vector<RunResult> &results,
                       std::ostream &out);
std::vector<RunResult> load_results_csv(std::istream &in);

/// Per-function medians plus paired win rates for optimizer pairs.
std::string summarize(const std::vector<RunResult> &results);

/// Write the CSV to out_path and return the summary text.
std::string report(const std::vector<RunResult> &results,
                   const std::string &out_path);

} // namespace squirrel

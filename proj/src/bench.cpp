#include "squirrel/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "squirrel/errors.hpp"
#include "squirrel/parallel.hpp"

namespace squirrel {

namespace {

double get_num(const Configuration &c, const std::string &name) {
  const ParamValue &v = c.at(name);
  if (std::holds_alternative<double>(v)) {
    return std::get<double>(v);
  }
  return static_cast<double>(std::get<std::int64_t>(v));
}

FuncSpec make_sphere10() {
  std::vector<ParamSpec> params;
  for (int i = 0; i < 10; ++i) {
    params.push_back(
        ParamSpec::make_continuous("x" + std::to_string(i), -5.0, 5.0));
  }
  FuncSpec f;
  f.name = "sphere-10d";
  f.space = ConfigSpace(std::move(params));
  f.known_optimum = 0.0;
  f.evaluate = [](const Configuration &c) {
    double sum = 0.0;
    for (int i = 0; i < 10; ++i) {
      double x = get_num(c, "x" + std::to_string(i));
      sum += x * x;
    }
    return sum;
  };
  return f;
}

FuncSpec make_branin2() {
  FuncSpec f;
  f.name = "branin-2d";
  f.space = ConfigSpace({ParamSpec::make_continuous("x", -5.0, 10.0),
                         ParamSpec::make_continuous("y", 0.0, 15.0)});
  f.known_optimum = 0.397887;
  f.evaluate = [](const Configuration &c) {
    constexpr double pi = std::numbers::pi;
    double x = get_num(c, "x");
    double y = get_num(c, "y");
    double a = 1.0;
    double b = 5.1 / (4.0 * pi * pi);
    double cc = 5.0 / pi;
    double r = 6.0;
    double s = 10.0;
    double t = 1.0 / (8.0 * pi);
    double inner = y - b * x * x + cc * x - r;
    return a * inner * inner + s * (1.0 - t) * std::cos(x) + s;
  };
  return f;
}

FuncSpec make_rosenbrock5() {
  std::vector<ParamSpec> params;
  for (int i = 0; i < 5; ++i) {
    params.push_back(
        ParamSpec::make_continuous("x" + std::to_string(i), -2.048, 2.048));
  }
  FuncSpec f;
  f.name = "rosenbrock-5d";
  f.space = ConfigSpace(std::move(params));
  f.known_optimum = 0.0;
  f.evaluate = [](const Configuration &c) {
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      double xi = get_num(c, "x" + std::to_string(i));
      double xj = get_num(c, "x" + std::to_string(i + 1));
      sum += 100.0 * (xj - xi * xi) * (xj - xi * xi) +
             (1.0 - xi) * (1.0 - xi);
    }
    return sum;
  };
  return f;
}

FuncSpec make_ackley5() {
  std::vector<ParamSpec> params;
  for (int i = 0; i < 5; ++i) {
    params.push_back(
        ParamSpec::make_continuous("x" + std::to_string(i), -32.768, 32.768));
  }
  FuncSpec f;
  f.name = "ackley-5d";
  f.space = ConfigSpace(std::move(params));
  f.known_optimum = 0.0;
  f.evaluate = [](const Configuration &c) {
    constexpr double pi = std::numbers::pi;
    double sum_sq = 0.0;
    double sum_cos = 0.0;
    for (int i = 0; i < 5; ++i) {
      double x = get_num(c, "x" + std::to_string(i));
      sum_sq += x * x;
      sum_cos += std::cos(2.0 * pi * x);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sum_sq / 5.0)) -
           std::exp(sum_cos / 5.0) + 20.0 + std::numbers::e;
  };
  return f;
}

// Mixed space: the categorical selects among three quadratic bowls with
// different centers and offsets; exercises every parameter kind end to end.
FuncSpec make_mixed5() {
  FuncSpec f;
  f.name = "mixed-5d";
  f.space = ConfigSpace({
      ParamSpec::make_continuous("x", -5.0, 5.0),
      ParamSpec::make_continuous("y", -5.0, 5.0),
      ParamSpec::make_continuous("scale", 1e-3, 10.0, /*log_scale=*/true),
      ParamSpec::make_integer("depth", 1, 8),
      ParamSpec::make_categorical("kernel", {"linear", "rbf", "poly"}),
  });
  f.known_optimum = 0.0;
  f.evaluate = [](const Configuration &c) {
    double x = get_num(c, "x");
    double y = get_num(c, "y");
    double scale = get_num(c, "scale");
    double depth = get_num(c, "depth");
    const std::string &kernel = std::get<std::string>(c.at("kernel"));

    double cx, cy, offset;
    if (kernel == "linear") {
      cx = -2.0;
      cy = -2.0;
      offset = 2.0;
    } else if (kernel == "rbf") {
      cx = 0.0;
      cy = 1.0;
      offset = 1.0;
    } else {
      cx = 3.0;
      cy = -1.0;
      offset = 0.0;
    }
    double ls = std::log(scale) - std::log(0.1);
    return (x - cx) * (x - cx) + (y - cy) * (y - cy) + ls * ls +
           0.5 * (depth - 3.0) * (depth - 3.0) + offset;
  };
  return f;
}

} // namespace

std::vector<FuncSpec> builtin_functions() {
  std::vector<FuncSpec> out;
  out.push_back(make_sphere10());
  out.push_back(make_branin2());
  out.push_back(make_rosenbrock5());
  out.push_back(make_ackley5());
  out.push_back(make_mixed5());
  return out;
}

const FuncSpec &builtin_function(const std::string &name) {
  static const std::vector<FuncSpec> functions = builtin_functions();
  for (const auto &f : functions) {
    if (f.name == name) {
      return f;
    }
  }
  throw ConfigError("unknown builtin function '" + name + "'");
}

namespace {

RunResult run_one(const FuncSpec &func, const std::string &kind,
                  std::uint64_t seed, const std::optional<Registry> &registry) {
  RunResult result;
  result.function = func.name;
  result.optimizer = kind;
  result.seed = seed;

  auto started = std::chrono::steady_clock::now();
  constexpr int kBatches = 16;
  constexpr int kBatchSize = 8;
  double best = std::numeric_limits<double>::infinity();

  auto evaluate = [&](const Configuration &config) {
    try {
      double y = func.evaluate(config);
      return std::isnan(y) ? std::numeric_limits<double>::infinity() : y;
    } catch (const std::exception &) {
      return std::numeric_limits<double>::infinity();
    }
  };

  if (kind == "squirrel") {
    OptimizerOptions options;
    options.registry = registry;
    Optimizer opt(func.space, seed, std::move(options));
    for (int b = 0; b < kBatches; ++b) {
      auto configs = opt.suggest();
      std::vector<double> values;
      values.reserve(configs.size());
      for (const auto &config : configs) {
        double y = evaluate(config);
        values.push_back(y);
        best = std::min(best, y);
      }
      opt.observe(configs, values);
      result.best_per_batch.push_back(best);
    }
  } else if (kind == "random") {
    Rng rng(derive_seed(seed, "random-search"));
    for (int b = 0; b < kBatches; ++b) {
      for (int i = 0; i < kBatchSize; ++i) {
        best = std::min(best, evaluate(sample_random(func.space, rng)));
      }
      result.best_per_batch.push_back(best);
    }
  } else {
    throw ConfigError("unknown optimizer kind '" + kind +
                      "' (expected squirrel or random)");
  }

  result.final_best = result.best_per_batch.back();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return result;
}

} // namespace

std::vector<RunResult>
run_experiment(const std::string &optimizer_kind,
               const std::vector<FuncSpec> &functions,
               const std::vector<std::uint64_t> &seeds,
               const std::optional<std::string> &registry_path) {
  if (seeds.empty()) {
    throw ConfigError("run_experiment: need at least one seed");
  }
  if (optimizer_kind != "squirrel" && optimizer_kind != "random") {
    throw ConfigError("unknown optimizer kind '" + optimizer_kind +
                      "' (expected squirrel or random)");
  }
  std::optional<Registry> registry;
  if (registry_path) {
    registry = load_registry(*registry_path);
  }

  const std::size_t n_tasks = functions.size() * seeds.size();
  std::vector<RunResult> results(n_tasks);
  std::vector<std::exception_ptr> errors(n_tasks);

  parallel::for_each_index(n_tasks, [&](std::size_t t) {
    const FuncSpec &func = functions[t / seeds.size()];
    std::uint64_t seed = seeds[t % seeds.size()];
    try {
      results[t] = run_one(func, optimizer_kind, seed, registry);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  });

  for (const auto &err : errors) {
    if (err) {
      std::rethrow_exception(err);
    }
  }
  return results;
}

void write_results_csv(const std::vector<RunResult> &results,
                       std::ostream &out) {
  out << "function,optimizer,seed,batch,best_so_far\n";
  for (const auto &r : results) {
    for (std::size_t b = 0; b < r.best_per_batch.size(); ++b) {
      out << r.function << ',' << r.optimizer << ',' << r.seed << ',' << b
          << ',' << format_double(r.best_per_batch[b]) << '\n';
    }
  }
}

std::vector<RunResult> load_results_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "function,optimizer,seed,batch,best_so_far") {
    throw ConfigError("results CSV header mismatch");
  }
  std::vector<RunResult> results;
  std::map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::istringstream row(line);
    std::string function, optimizer, seed_s, batch_s, best_s;
    if (!std::getline(row, function, ',') ||
        !std::getline(row, optimizer, ',') ||
        !std::getline(row, seed_s, ',') || !std::getline(row, batch_s, ',') ||
        !std::getline(row, best_s)) {
      throw ConfigError("malformed results CSV row: " + line);
    }
    std::string key = function + '\x1f' + optimizer + '\x1f' + seed_s;
    auto it = index.find(key);
    if (it == index.end()) {
      RunResult r;
      r.function = function;
      r.optimizer = optimizer;
      r.seed = std::stoull(seed_s);
      results.push_back(std::move(r));
      it = index.emplace(key, results.size() - 1).first;
    }
    RunResult &r = results[it->second];
    std::size_t batch = std::stoul(batch_s);
    if (batch != r.best_per_batch.size()) {
      throw ConfigError("results CSV batches out of order for " + function);
    }
    double best = best_s == "inf"
                      ? std::numeric_limits<double>::infinity()
                      : std::stod(best_s);
    r.best_per_batch.push_back(best);
    r.final_best = best;
  }
  return results;
}

namespace {

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n == 0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

std::string summarize(const std::vector<RunResult> &results) {
  // Group by function (first-appearance order), then optimizer.
  std::vector<std::string> functions;
  std::map<std::string, std::map<std::string, std::map<std::uint64_t, double>>>
      finals; // function -> optimizer -> seed -> final best
  for (const auto &r : results) {
    if (std::find(functions.begin(), functions.end(), r.function) ==
        functions.end()) {
      functions.push_back(r.function);
    }
    finals[r.function][r.optimizer][r.seed] = r.final_best;
  }

  std::ostringstream out;
  out << "function            optimizer  seeds  median_final_best\n";
  for (const auto &fname : functions) {
    for (const auto &[opt, by_seed] : finals[fname]) {
      std::vector<double> values;
      for (const auto &[seed, best] : by_seed) {
        values.push_back(best);
      }
      std::string pad_f(fname.size() < 20 ? 20 - fname.size() : 1, ' ');
      std::string pad_o(opt.size() < 11 ? 11 - opt.size() : 1, ' ');
      out << fname << pad_f << opt << pad_o << values.size() << "      "
          << format_double(median(values)) << '\n';
    }
  }

  for (const auto &fname : functions) {
    const auto &by_opt = finals[fname];
    std::vector<std::string> opts;
    for (const auto &[opt, by_seed] : by_opt) {
      opts.push_back(opt);
    }
    for (std::size_t i = 0; i < opts.size(); ++i) {
      for (std::size_t j = i + 1; j < opts.size(); ++j) {
        const auto &a = by_opt.at(opts[i]);
        const auto &b = by_opt.at(opts[j]);
        int wins = 0, ties = 0, losses = 0, paired = 0;
        for (const auto &[seed, best_a] : a) {
          auto it = b.find(seed);
          if (it == b.end()) {
            continue;
          }
          ++paired;
          if (best_a < it->second) {
            ++wins;
          } else if (best_a == it->second) {
            ++ties;
          } else {
            ++losses;
          }
        }
        if (paired > 0) {
          out << fname << ": " << opts[i] << " vs " << opts[j]
              << " paired wins " << wins << "/" << paired << " (ties " << ties
              << ", losses " << losses << ")\n";
        }
      }
    }
  }
  return out.str();
}

std::string report(const std::vector<RunResult> &results,
                   const std::string &out_path) {
  std::ofstream out(out_path);
  if (!out) {
    throw ConfigError("cannot write results CSV to '" + out_path + "'");
  }
  write_results_csv(results, out);
  if (!out.good()) {
    throw ConfigError("failed while writing results CSV to '" + out_path + "'");
  }
  return summarize(results);
}

} // namespace squirrel

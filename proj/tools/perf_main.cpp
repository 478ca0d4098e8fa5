// Compares the serial reference path (1 worker) against the OpenMP path for
// every parallel kernel, checking bitwise-identical results and reporting
// wall times. Usage: squirrel-perf [--small]

#include <chrono>
#include <cstring>
#include <iostream>
#include <sstream>
#include <vector>

#include "squirrel/bench.hpp"
#include "squirrel/bo.hpp"
#include "squirrel/gp.hpp"
#include "squirrel/parallel.hpp"
#include "squirrel/rf.hpp"

using namespace squirrel;

namespace {

struct Timed {
  double seconds;
};

template <typename F> auto timed(F &&f, double &seconds) {
  auto start = std::chrono::steady_clock::now();
  auto result = f();
  seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

std::vector<UnitVector> random_inputs(std::size_t n, std::size_t d,
                                      Rng &rng) {
  std::vector<UnitVector> x(n, UnitVector(d));
  for (auto &row : x) {
    for (auto &v : row) {
      v = rng.next_double();
    }
  }
  return x;
}

void row(const std::string &name, double serial, double parallel, bool equal) {
  std::cout << name << ": serial " << serial << " s, parallel " << parallel
            << " s, speedup " << (parallel > 0 ? serial / parallel : 0.0)
            << "x, results " << (equal ? "identical" : "DIFFER") << "\n";
}

} // namespace

int main(int argc, char **argv) {
  bool small = argc > 1 && std::strcmp(argv[1], "--small") == 0;
  const std::size_t n = small ? 24 : 96;
  const std::size_t d = 5;
  int hw_threads = parallel::max_threads();
  std::cout << "openmp=" << (parallel::openmp_enabled() ? "yes" : "no")
            << " hardware_workers=" << hw_threads << "\n";

  Rng data_rng(7);
  auto x = random_inputs(n, d, data_rng);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double v : x[i]) {
      s += (v - 0.3) * (v - 0.3);
    }
    z[i] = s;
  }

  bool all_equal = true;

  {
    double t_serial, t_parallel;
    parallel::set_max_threads(1);
    Rng rng_a(11);
    auto gp_a = timed([&] { return GpModel::fit(x, z, rng_a); }, t_serial);
    parallel::set_max_threads(0);
    Rng rng_b(11);
    auto gp_b = timed([&] { return GpModel::fit(x, z, rng_b); }, t_parallel);
    UnitVector probe(d, 0.4);
    bool equal = gp_a.predict(probe) == gp_b.predict(probe) &&
                 gp_a.hyperparams().lengthscales ==
                     gp_b.hyperparams().lengthscales;
    all_equal = all_equal && equal;
    row("gp_fit", t_serial, t_parallel, equal);
  }

  {
    double t_serial, t_parallel;
    parallel::set_max_threads(1);
    Rng rng_a(13);
    auto rf_a = timed([&] { return RfModel::fit(x, z, rng_a); }, t_serial);
    parallel::set_max_threads(0);
    Rng rng_b(13);
    auto rf_b = timed([&] { return RfModel::fit(x, z, rng_b); }, t_parallel);
    UnitVector probe(d, 0.6);
    bool equal = rf_a.predict(probe) == rf_b.predict(probe);
    all_equal = all_equal && equal;
    row("rf_fit", t_serial, t_parallel, equal);
  }

  {
    const FuncSpec &func = builtin_function("mixed-5d");
    std::vector<std::uint64_t> seeds = small ? std::vector<std::uint64_t>{0}
                                             : std::vector<std::uint64_t>{0, 1};
    double t_serial, t_parallel;
    parallel::set_max_threads(1);
    auto res_a = timed(
        [&] {
          return run_experiment("squirrel", {func}, seeds);
        },
        t_serial);
    parallel::set_max_threads(0);
    auto res_b = timed(
        [&] {
          return run_experiment("squirrel", {func}, seeds);
        },
        t_parallel);
    std::ostringstream csv_a, csv_b;
    write_results_csv(res_a, csv_a);
    write_results_csv(res_b, csv_b);
    bool equal = csv_a.str() == csv_b.str();
    all_equal = all_equal && equal;
    row("full_run", t_serial, t_parallel, equal);
  }

  if (!all_equal) {
    std::cout << "FAIL: serial and parallel paths disagree\n";
    return 1;
  }
  std::cout << "OK\n";
  return 0;
}

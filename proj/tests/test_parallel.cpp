#include <doctest.h>

#include <sstream>
#include <vector>

#include "squirrel/bench.hpp"
#include "squirrel/gp.hpp"
#include "squirrel/parallel.hpp"
#include "squirrel/rf.hpp"

using namespace squirrel;

namespace {

// Restores the worker cap on scope exit so test order does not matter.
struct ThreadGuard {
  ~ThreadGuard() { parallel::set_max_threads(0); }
};

std::vector<UnitVector> inputs(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<UnitVector> x(n, UnitVector(d));
  for (auto &row : x) {
    for (auto &v : row) {
      v = rng.next_double();
    }
  }
  return x;
}

} // namespace

TEST_CASE("for_each_index covers every index exactly once") {
  ThreadGuard guard;
  std::vector<int> hits(1000, 0);
  parallel::for_each_index(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) {
    CHECK(h == 1);
  }
}

TEST_CASE("serial reference and parallel kernels agree bitwise: gp") {
  ThreadGuard guard;
  auto x = inputs(40, 3, 1);
  std::vector<double> z;
  for (const auto &row : x) {
    z.push_back(row[0] * row[0] + 0.5 * row[1] - row[2]);
  }

  parallel::set_max_threads(1);
  Rng rng_serial(5);
  auto gp_serial = GpModel::fit(x, z, rng_serial);

  parallel::set_max_threads(0);
  Rng rng_parallel(5);
  auto gp_parallel = GpModel::fit(x, z, rng_parallel);

  CHECK(gp_serial.hyperparams().lengthscales ==
        gp_parallel.hyperparams().lengthscales);
  CHECK(gp_serial.hyperparams().noise_variance ==
        gp_parallel.hyperparams().noise_variance);
  for (double q = 0.05; q < 1.0; q += 0.13) {
    auto a = gp_serial.predict({q, 1.0 - q, 0.5});
    auto b = gp_parallel.predict({q, 1.0 - q, 0.5});
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
  }
}

TEST_CASE("serial reference and parallel kernels agree bitwise: rf") {
  ThreadGuard guard;
  auto x = inputs(60, 2, 3);
  std::vector<double> z;
  for (const auto &row : x) {
    z.push_back(row[0] > 0.5 ? row[1] : -row[1]);
  }

  parallel::set_max_threads(1);
  Rng rng_serial(7);
  auto rf_serial = RfModel::fit(x, z, rng_serial);

  parallel::set_max_threads(0);
  Rng rng_parallel(7);
  auto rf_parallel = RfModel::fit(x, z, rng_parallel);

  for (double q = 0.05; q < 1.0; q += 0.09) {
    auto a = rf_serial.predict({q, 1.0 - q});
    auto b = rf_parallel.predict({q, 1.0 - q});
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
  }
}

TEST_CASE("serial reference and parallel bench runs emit identical CSVs") {
  ThreadGuard guard;
  const auto &func = builtin_function("branin-2d");

  parallel::set_max_threads(1);
  auto serial = run_experiment("random", {func}, {0, 1, 2, 3});
  std::stringstream csv_serial;
  write_results_csv(serial, csv_serial);

  parallel::set_max_threads(0);
  auto parallel_res = run_experiment("random", {func}, {0, 1, 2, 3});
  std::stringstream csv_parallel;
  write_results_csv(parallel_res, csv_parallel);

  CHECK(csv_serial.str() == csv_parallel.str());
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "squirrel/bench.hpp"
#include "squirrel/errors.hpp"

using namespace squirrel;

TEST_CASE("builtin functions hit their analytic optima") {
  const auto &sphere = builtin_function("sphere-10d");
  Configuration origin;
  for (int i = 0; i < 10; ++i) {
    origin.set("x" + std::to_string(i), 0.0);
  }
  CHECK(sphere.evaluate(origin) == 0.0);

  const auto &branin = builtin_function("branin-2d");
  Configuration b;
  b.set("x", std::numbers::pi);
  b.set("y", 2.275);
  CHECK(branin.evaluate(b) == doctest::Approx(0.397887).epsilon(1e-5));

  const auto &ackley = builtin_function("ackley-5d");
  Configuration a;
  for (int i = 0; i < 5; ++i) {
    a.set("x" + std::to_string(i), 0.0);
  }
  CHECK(std::abs(ackley.evaluate(a)) <= 1e-12);

  const auto &rosen = builtin_function("rosenbrock-5d");
  Configuration r;
  for (int i = 0; i < 5; ++i) {
    r.set("x" + std::to_string(i), 1.0);
  }
  CHECK(rosen.evaluate(r) == 0.0);

  const auto &mixed = builtin_function("mixed-5d");
  Configuration m;
  m.set("x", 3.0);
  m.set("y", -1.0);
  m.set("scale", 0.1);
  m.set("depth", std::int64_t{3});
  m.set("kernel", std::string("poly"));
  CHECK(mixed.evaluate(m) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK(builtin_functions().size() == 5);
  CHECK_THROWS_AS(builtin_function("nope"), ConfigError);
}

TEST_CASE("the mixed space exercises every parameter kind") {
  const auto &mixed = builtin_function("mixed-5d");
  bool has_log = false, has_int = false, has_cat = false, has_cont = false;
  for (const auto &p : mixed.space.params()) {
    has_log |= p.log_scale;
    has_int |= p.kind == ParamKind::integer;
    has_cat |= p.kind == ParamKind::categorical;
    has_cont |= p.kind == ParamKind::continuous && !p.log_scale;
  }
  CHECK(has_log);
  CHECK(has_int);
  CHECK(has_cat);
  CHECK(has_cont);
}

TEST_CASE("random runs are monotone, complete, and reproducible") {
  const auto &branin = builtin_function("branin-2d");
  auto results = run_experiment("random", {branin}, {0, 1});
  REQUIRE(results.size() == 2);
  for (const auto &r : results) {
    REQUIRE(r.best_per_batch.size() == 16);
    for (std::size_t b = 1; b < 16; ++b) {
      CHECK(r.best_per_batch[b] <= r.best_per_batch[b - 1]);
    }
    CHECK(r.final_best == r.best_per_batch.back());
  }
  auto again = run_experiment("random", {branin}, {0, 1});
  CHECK(again[0].best_per_batch == results[0].best_per_batch);
  CHECK(again[1].best_per_batch == results[1].best_per_batch);
}

TEST_CASE("run_experiment validates its inputs") {
  const auto &branin = builtin_function("branin-2d");
  CHECK_THROWS_AS(run_experiment("random", {branin}, {}), ConfigError);
  CHECK_THROWS_AS(run_experiment("sa", {branin}, {0}), ConfigError);
}

TEST_CASE("exceptions in the objective become +inf trials") {
  FuncSpec bomb;
  bomb.name = "bomb";
  bomb.space = ConfigSpace({ParamSpec::make_continuous("x", 0.0, 1.0)});
  bomb.evaluate = [](const Configuration &) -> double {
    throw std::runtime_error("boom");
  };
  auto results = run_experiment("random", {bomb}, {0});
  REQUIRE(results.size() == 1);
  for (double best : results[0].best_per_batch) {
    CHECK(std::isinf(best));
  }
}

TEST_CASE("results CSV round trips and the summary reports win rates") {
  const auto &branin = builtin_function("branin-2d");
  auto results = run_experiment("random", {branin}, {0, 1, 2});
  std::stringstream csv;
  write_results_csv(results, csv);

  std::string first_line;
  std::getline(csv, first_line);
  CHECK(first_line == "function,optimizer,seed,batch,best_so_far");
  csv.seekg(0);

  auto loaded = load_results_csv(csv);
  REQUIRE(loaded.size() == 3);
  CHECK(loaded[0].best_per_batch == results[0].best_per_batch);
  CHECK(loaded[2].final_best == results[2].final_best);

  // single result: 16 data rows + header
  std::stringstream single;
  write_results_csv({results[0]}, single);
  int lines = 0;
  std::string line;
  while (std::getline(single, line)) {
    ++lines;
  }
  CHECK(lines == 17);

  // empty results: header-only
  std::stringstream empty;
  write_results_csv({}, empty);
  CHECK(empty.str() == "function,optimizer,seed,batch,best_so_far\n");

  // two optimizers on one function produce a win-rate line
  auto more = results;
  for (auto r : results) {
    r.optimizer = "squirrel";
    more.push_back(r);
  }
  std::string summary = summarize(more);
  CHECK(summary.find("paired wins") != std::string::npos);
  CHECK(summary.find("branin-2d") != std::string::npos);
}

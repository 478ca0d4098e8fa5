#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <set>

#include "squirrel/de.hpp"
#include "squirrel/errors.hpp"

using namespace squirrel;

namespace {

ConfigSpace cube(std::size_t d) {
  std::vector<ParamSpec> params;
  for (std::size_t i = 0; i < d; ++i) {
    params.push_back(
        ParamSpec::make_continuous("x" + std::to_string(i), 0.0, 1.0));
  }
  return ConfigSpace(std::move(params));
}

double sphere(const Configuration &c, std::size_t d) {
  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double x = std::get<double>(c.at("x" + std::to_string(i)));
    sum += (x - 0.3) * (x - 0.3);
  }
  return sum;
}

History history_of(const ConfigSpace &space, const std::vector<double> &xs,
                   const std::vector<double> &ys) {
  History h(space);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Configuration c;
    c.set("x0", xs[i]);
    h.record(c, ys[i], static_cast<int>(i / 8), StageTag::bo);
  }
  return h;
}

} // namespace

TEST_CASE("sinusoidal_f hits the documented values") {
  CHECK(sinusoidal_f(5, 5, 0.25) == 0.5); // envelope is exactly zero
  CHECK(sinusoidal_f(0, 5, 0.25) == doctest::Approx(0.5).epsilon(1e-15));
  // freq 0.25, g 1, G_max 5: sin(3pi/2) = -1 -> 0.5*(1 - 0.8) = 0.1
  CHECK(std::abs(sinusoidal_f(1, 5, 0.25) - 0.1) < 1e-15);
  double expected = 0.5 * (std::sin(2.0 * std::numbers::pi * 0.25 * 1.0 +
                                    std::numbers::pi) *
                               (4.0 / 5.0) +
                           1.0);
  CHECK(sinusoidal_f(1, 5, 0.25) == expected);
}

TEST_CASE("sinusoidal_f stays within its clamp for all inputs") {
  for (int g_max : {1, 2, 5, 20}) {
    for (int g = 0; g <= g_max; ++g) {
      for (double freq : {0.05, 0.25, 1.0, 3.7}) {
        double f = sinusoidal_f(g, g_max, freq);
        CHECK(f >= 0.05);
        CHECK(f <= 1.0);
      }
    }
  }
  CHECK_THROWS_AS(sinusoidal_f(2, 1, 0.25), std::invalid_argument);
}

TEST_CASE("de_init_random proposes its own population") {
  auto space = cube(3);
  Rng rng(5);
  auto [state, batch] = de_init_random(space, rng);
  CHECK(batch.size() == 8);
  CHECK(state.population().size() == 8);
  CHECK(!state.fully_evaluated());
  CHECK(state.pending() == DeState::Pending::init);
  for (const auto &u : state.population()) {
    for (double coord : u) {
      CHECK(coord >= 0.0);
      CHECK(coord <= 1.0);
    }
  }

  Rng rng2(5);
  auto [state2, batch2] = de_init_random(space, rng2);
  CHECK(batch == batch2);
}

TEST_CASE("de_init_from_history places the incumbent first") {
  auto space = cube(1);
  SUBCASE("plenty of history draws without replacement") {
    std::vector<double> xs, ys;
    for (int i = 0; i < 20; ++i) {
      xs.push_back(i / 20.0);
      ys.push_back(i == 7 ? -5.0 : static_cast<double>(i));
    }
    auto h = history_of(space, xs, ys);
    Rng rng(7);
    auto state = de_init_from_history(h, rng);
    CHECK(state.population().size() == 8);
    CHECK(state.values()[0] == -5.0);
    CHECK(state.population()[0][0] == doctest::Approx(7 / 20.0));
    CHECK(state.fully_evaluated());
    // without replacement: all members distinct trials
    std::set<double> seen;
    for (const auto &u : state.population()) {
      seen.insert(u[0]);
    }
    CHECK(seen.size() == 8);
  }

  SUBCASE("exactly eight trials gives a permutation with the incumbent first") {
    std::vector<double> xs, ys;
    for (int i = 0; i < 8; ++i) {
      xs.push_back(i / 8.0);
      ys.push_back(8.0 - i);
    }
    auto h = history_of(space, xs, ys);
    Rng rng(9);
    auto state = de_init_from_history(h, rng);
    std::multiset<double> got, want;
    for (const auto &u : state.population()) {
      got.insert(u[0]);
    }
    for (double x : xs) {
      want.insert(x);
    }
    CHECK(got == want);
    CHECK(state.values()[0] == 1.0);
  }

  SUBCASE("single trial pads with fresh random members") {
    auto h = history_of(space, {0.5}, {1.0});
    Rng rng(11);
    auto state = de_init_from_history(h, rng);
    CHECK(state.population().size() == 8);
    CHECK(state.values()[0] == 1.0);
    CHECK(!state.fully_evaluated());
  }

  SUBCASE("empty history errors") {
    History h(space);
    Rng rng(13);
    CHECK_THROWS_AS(de_init_from_history(h, rng), std::invalid_argument);
  }
}

TEST_CASE("de_mutate_best2 obeys the F=0 and reflection rules") {
  auto space = cube(1);
  std::vector<double> xs{0.5, 0.9, 0.1, 0.7, 0.3};
  std::vector<double> ys{0.0, 1.0, 2.0, 3.0, 4.0}; // best is x=0.5
  auto h = history_of(space, xs, ys);
  Rng rng(17);
  // Build a fully evaluated 8-member state (with replacement from 4 others).
  auto state = de_init_from_history(h, rng);
  REQUIRE(state.fully_evaluated());

  SUBCASE("F = 0 collapses every mutant onto the best member") {
    Rng mrng(19);
    auto mutants = de_mutate_best2(state, 0.0, mrng);
    for (const auto &m : mutants) {
      CHECK(m[0] == state.population()[state.best_index()][0]);
    }
  }

  SUBCASE("mutants stay inside the cube via reflection then clamp") {
    Rng mrng(23);
    for (double f : {0.3, 0.8, 1.0}) {
      for (const auto &m : de_mutate_best2(state, f, mrng)) {
        CHECK(m[0] >= 0.0);
        CHECK(m[0] <= 1.0);
      }
    }
  }
}

TEST_CASE("reflection arithmetic matches the documented example") {
  // best 0.5, donors 0.9, 0.1, 0.7, 0.3 with F = 0.5:
  // v = 0.5 + 0.5*0.8 + 0.5*0.4 = 1.1 -> reflect -> 0.9
  double v = 0.5 + 0.5 * (0.9 - 0.1) + 0.5 * (0.7 - 0.3);
  CHECK(v == doctest::Approx(1.1));
  double reflected = 2.0 - v;
  CHECK(reflected == doctest::Approx(0.9));
}

TEST_CASE("identical populations mutate to themselves") {
  auto space = cube(1);
  auto h = history_of(space, {0.4, 0.4, 0.4, 0.4, 0.4, 0.4, 0.4, 0.4},
                      {1, 1, 1, 1, 1, 1, 1, 1});
  Rng rng(29);
  auto state = de_init_from_history(h, rng);
  Rng mrng(31);
  for (const auto &m : de_mutate_best2(state, 0.7, mrng)) {
    CHECK(m[0] == doctest::Approx(0.4));
  }
}

TEST_CASE("de_crossover honors CR edge cases and j_rand") {
  UnitVector parent{0.0, 0.0, 0.0, 0.0};
  UnitVector mutant{1.0, 1.0, 1.0, 1.0};

  SUBCASE("CR clipped to 1 copies the mutant") {
    Rng rng(37);
    auto child = de_crossover(parent, mutant, rng, 50.0, 1e-12);
    CHECK(child == mutant);
  }

  SUBCASE("CR clipped to 0 takes exactly the j_rand coordinate") {
    Rng rng(41);
    auto child = de_crossover(parent, mutant, rng, -50.0, 1e-12);
    int from_mutant = 0;
    for (double v : child) {
      from_mutant += v == 1.0 ? 1 : 0;
    }
    CHECK(from_mutant == 1);
  }

  SUBCASE("one dimension always inherits the mutant") {
    Rng rng(43);
    auto child = de_crossover({0.0}, {1.0}, rng, -50.0, 1e-12);
    CHECK(child[0] == 1.0);
  }
}

TEST_CASE("de_propose_batch / de_select protocol") {
  auto space = cube(2);
  Rng rng(47);
  auto [state, batch] = de_init_random(space, rng);
  DeParams params;
  params.g_max = 2;

  // double propose without observe
  CHECK_THROWS_AS(de_propose_batch(state, params, space, rng), ProtocolError);

  std::vector<double> values;
  for (const auto &c : batch) {
    values.push_back(sphere(c, 2));
  }
  de_select(state, values);
  CHECK(state.fully_evaluated());
  CHECK(state.generation() == 0);

  auto offspring = de_propose_batch(state, params, space, rng);
  CHECK(offspring.size() == 8);
  CHECK_THROWS_AS(de_propose_batch(state, params, space, rng), ProtocolError);

  SUBCASE("all-worse offspring leave the population unchanged") {
    auto before = state.population();
    de_select(state, std::vector<double>(8, 1e9));
    CHECK(state.population() == before);
    CHECK(state.generation() == 1);
  }

  SUBCASE("all-better offspring replace the population") {
    de_select(state, std::vector<double>(8, -1e9));
    for (double v : state.values()) {
      CHECK(v == -1e9);
    }
  }

  SUBCASE("ties accept the offspring") {
    auto pending = state.pending_vectors();
    de_select(state, state.values());
    CHECK(state.population() == pending);
  }

  SUBCASE("value count mismatch errors") {
    CHECK_THROWS_AS(de_select(state, {1.0, 2.0}), ProtocolError);
  }
}

TEST_CASE("best value never increases over generations") {
  const std::size_t d = 5;
  auto space = cube(d);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    auto [state, batch] = de_init_random(space, rng);
    std::vector<double> values;
    for (const auto &c : batch) {
      values.push_back(sphere(c, d));
    }
    de_select(state, values);

    DeParams params;
    params.g_max = 10;
    double best = *std::min_element(state.values().begin(), state.values().end());
    for (int g = 0; g < 10; ++g) {
      auto offspring = de_propose_batch(state, params, space, rng);
      std::vector<double> ys;
      for (const auto &c : offspring) {
        ys.push_back(sphere(c, d));
      }
      de_select(state, ys);
      double new_best =
          *std::min_element(state.values().begin(), state.values().end());
      CHECK(new_best <= best + 1e-12);
      best = new_best;
      for (const auto &u : state.population()) {
        for (double coord : u) {
          CHECK(coord >= 0.0);
          CHECK(coord <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("proposals are deterministic per state and seed") {
  auto space = cube(3);
  Rng ra(53), rb(53);
  auto [sa, ba] = de_init_random(space, ra);
  auto [sb, bb] = de_init_random(space, rb);
  std::vector<double> values;
  for (const auto &c : ba) {
    values.push_back(sphere(c, 3));
  }
  de_select(sa, values);
  de_select(sb, values);
  DeParams params;
  params.g_max = 3;
  CHECK(de_propose_batch(sa, params, space, ra) ==
        de_propose_batch(sb, params, space, rb));
}

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "squirrel/errors.hpp"
#include "squirrel/history.hpp"

using namespace squirrel;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConfigSpace one_d() { return ConfigSpace({ParamSpec::make_continuous("x", 0.0, 1.0)}); }

Configuration at(double x) {
  Configuration c;
  c.set("x", x);
  return c;
}

} // namespace

TEST_CASE("record updates the incumbent on strict improvement only") {
  History h(one_d());
  h.record(at(0.1), 3.0, 0, StageTag::warmstart);
  REQUIRE(h.incumbent());
  CHECK(h.incumbent()->y == 3.0);

  h.record(at(0.2), 5.0, 0, StageTag::warmstart);
  CHECK(h.incumbent()->y == 3.0);
  CHECK(h.incumbent()->trial_index == 0);

  // tie: first seen wins
  h.record(at(0.3), 3.0, 0, StageTag::warmstart);
  CHECK(h.incumbent()->trial_index == 0);

  h.record(at(0.4), 2.0, 1, StageTag::bo);
  CHECK(h.incumbent()->y == 2.0);
  CHECK(h.incumbent()->trial_index == 3);
}

TEST_CASE("incumbent handles ties, emptiness, and all-infinite histories") {
  History empty(one_d());
  CHECK(!empty.incumbent());

  History h(one_d());
  h.record(at(0.1), 4.0, 0, StageTag::bo);
  h.record(at(0.2), 2.0, 0, StageTag::bo);
  h.record(at(0.3), 7.0, 0, StageTag::bo);
  CHECK(h.incumbent()->y == 2.0);

  History ties(one_d());
  ties.record(at(0.1), 2.0, 0, StageTag::bo);
  ties.record(at(0.2), 2.0, 0, StageTag::bo);
  CHECK(ties.incumbent()->trial_index == 0);

  History infs(one_d());
  infs.record(at(0.1), kInf, 0, StageTag::bo);
  CHECK(!infs.incumbent());
}

TEST_CASE("record rejects NaN") {
  History h(one_d());
  CHECK_THROWS_AS(h.record(at(0.5), std::nan(""), 0, StageTag::bo),
                  ConfigError);
}

TEST_CASE("design_matrix imputes infinities") {
  History h(one_d());
  h.record(at(0.1), 1.0, 0, StageTag::bo);
  h.record(at(0.2), 5.0, 0, StageTag::bo);
  h.record(at(0.3), kInf, 0, StageTag::bo);
  Design d = h.design_matrix();
  REQUIRE(d.y.size() == 3);
  CHECK(d.y[0] == 1.0);
  CHECK(d.y[1] == 5.0);
  CHECK(d.y[2] == doctest::Approx(17.0)); // 5 + 3*(5-1)
  CHECK(d.x[2][0] == doctest::Approx(0.3));
}

TEST_CASE("design_matrix drops everything when no finite y exists") {
  History h(one_d());
  CHECK(h.design_matrix().y.empty());
  h.record(at(0.1), kInf, 0, StageTag::bo);
  CHECK(h.design_matrix().y.empty());
}

TEST_CASE("best-so-far is non-increasing over insertion order") {
  History h(one_d());
  Rng rng(5);
  double best = kInf;
  for (int i = 0; i < 50; ++i) {
    double y = 10.0 * rng.next_double() - 2.0;
    h.record(at(rng.next_double()), y, i / 8, StageTag::bo);
    best = std::min(best, y);
    CHECK(h.incumbent()->y == best);
  }
}

TEST_CASE("csv export/import round trips") {
  ConfigSpace space({
      ParamSpec::make_continuous("lr", 1e-4, 1.0, true),
      ParamSpec::make_integer("depth", 1, 8),
      ParamSpec::make_categorical("kernel", {"rbf", "poly"}),
  });
  History h(space);
  Configuration c;
  c.set("lr", 0.01);
  c.set("depth", std::int64_t{3});
  c.set("kernel", std::string("poly"));
  h.record(c, 1.25, 0, StageTag::warmstart);
  Configuration c2;
  c2.set("lr", 0.5);
  c2.set("depth", std::int64_t{8});
  c2.set("kernel", std::string("rbf"));
  h.record(c2, kInf, 1, StageTag::bo);

  std::stringstream buf;
  h.to_csv(buf);
  History back = History::from_csv(space, buf);
  REQUIRE(back.size() == 2);
  CHECK(back.trials()[0].config == h.trials()[0].config);
  CHECK(back.trials()[0].y == 1.25);
  CHECK(back.trials()[1].y == kInf);
  CHECK(back.trials()[1].batch_index == 1);
  CHECK(back.trials()[1].stage == StageTag::bo);

  // byte-stable re-export
  std::stringstream buf2;
  back.to_csv(buf2);
  CHECK(buf.str() == buf2.str());
}

TEST_CASE("csv import validates the header") {
  ConfigSpace space = one_d();
  std::stringstream bad("batch_index,stage_tag,wrong,y\n");
  CHECK_THROWS_AS(History::from_csv(space, bad), ConfigError);
}

#include <doctest.h>

#include <cmath>
#include <map>

#include "squirrel/errors.hpp"
#include "squirrel/space.hpp"

using namespace squirrel;

namespace {

ConfigSpace mixed_space() {
  return ConfigSpace({
      ParamSpec::make_continuous("lr", 1e-4, 1.0, /*log_scale=*/true),
      ParamSpec::make_integer("depth", 1, 8),
      ParamSpec::make_categorical("kernel", {"rbf", "poly", "linear"}),
  });
}

} // namespace

TEST_CASE("parse_space builds spaces in document order") {
  auto space = parse_space(R"([{"name":"x","kind":"continuous","lower":0,"upper":10}])");
  CHECK(space.dimension() == 1);
  CHECK(space.param(0).name == "x");

  auto s3 = parse_space(R"([
    {"name":"lr","kind":"continuous","lower":1e-4,"upper":1.0,"log_scale":true},
    {"name":"depth","kind":"integer","lower":1,"upper":8},
    {"name":"kernel","kind":"categorical","choices":["rbf","poly","linear"]}
  ])");
  CHECK(s3.dimension() == 3);
  CHECK(s3.param(0).name == "lr");
  CHECK(s3.param(2).choices.size() == 3);
}

TEST_CASE("parse_space rejects bad documents with the parameter named") {
  // degenerate bounds
  CHECK_THROWS_WITH_AS(
      parse_space(R"([{"name":"x","kind":"continuous","lower":5,"upper":5}])"),
      doctest::Contains("x"), ConfigError);
  // duplicate names
  CHECK_THROWS_AS(parse_space(R"([
    {"name":"x","kind":"continuous","lower":0,"upper":1},
    {"name":"x","kind":"integer","lower":0,"upper":3}
  ])"),
                  ConfigError);
  // log scale needs positive lower
  CHECK_THROWS_AS(
      parse_space(
          R"([{"name":"x","kind":"continuous","lower":0,"upper":1,"log_scale":true}])"),
      ConfigError);
  // unknown kind
  CHECK_THROWS_AS(parse_space(R"([{"name":"x","kind":"float","lower":0,"upper":1}])"),
                  ConfigError);
  // unknown key
  CHECK_THROWS_AS(
      parse_space(
          R"([{"name":"x","kind":"continuous","lower":0,"upper":1,"prior":"u"}])"),
      ConfigError);
  // empty choices
  CHECK_THROWS_AS(parse_space(R"([{"name":"k","kind":"categorical","choices":[]}])"),
                  ConfigError);
  // duplicate choices
  CHECK_THROWS_AS(
      parse_space(R"([{"name":"k","kind":"categorical","choices":["a","a"]}])"),
      ConfigError);
}

TEST_CASE("encode maps the documented examples") {
  ConfigSpace lin({ParamSpec::make_continuous("x", 0.0, 10.0)});
  Configuration c;
  c.set("x", 5.0);
  CHECK(encode(lin, c)[0] == doctest::Approx(0.5).epsilon(1e-15));

  ConfigSpace logsp({ParamSpec::make_continuous("lr", 1e-4, 1.0, true)});
  Configuration c2;
  c2.set("lr", 1e-2);
  CHECK(encode(logsp, c2)[0] == doctest::Approx(0.5).epsilon(1e-12));

  ConfigSpace cat({ParamSpec::make_categorical("k", {"a", "b", "c", "d"})});
  Configuration c3;
  c3.set("k", std::string("c")); // index 2
  CHECK(encode(cat, c3)[0] == doctest::Approx(0.625).epsilon(1e-15));
}

TEST_CASE("encode rejects out-of-bounds values") {
  ConfigSpace lin({ParamSpec::make_continuous("x", 0.0, 10.0)});
  Configuration c;
  c.set("x", 11.0);
  CHECK_THROWS_AS(encode(lin, c), ConfigError);
}

TEST_CASE("decode maps the documented examples") {
  ConfigSpace lin({ParamSpec::make_continuous("x", 0.0, 10.0)});
  CHECK(std::get<double>(decode(lin, {0.5}).at("x")) ==
        doctest::Approx(5.0).epsilon(1e-15));

  ConfigSpace cat({ParamSpec::make_categorical("k", {"a", "b", "c", "d"})});
  CHECK(std::get<std::string>(decode(cat, {0.999}).at("k")) == "d");

  ConfigSpace integer({ParamSpec::make_integer("n", 1, 8)});
  CHECK(std::get<std::int64_t>(decode(integer, {0.0}).at("n")) == 1);
  CHECK(std::get<std::int64_t>(decode(integer, {1.0}).at("n")) == 8);
}

TEST_CASE("round trip: decode(encode(c)) == c for exact kinds") {
  auto space = mixed_space();
  Rng rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    Configuration c = sample_random(space, rng);
    Configuration back = decode(space, encode(space, c));
    CHECK(std::get<std::int64_t>(back.at("depth")) ==
          std::get<std::int64_t>(c.at("depth")));
    CHECK(std::get<std::string>(back.at("kernel")) ==
          std::get<std::string>(c.at("kernel")));
    // continuous round trip in the encoding's (log) scale
    double v = std::get<double>(c.at("lr"));
    double v2 = std::get<double>(back.at("lr"));
    CHECK(std::abs(std::log(v) - std::log(v2)) <=
          1e-9 * (std::log(1.0) - std::log(1e-4)));
  }
}

TEST_CASE("idempotent projection: decode(encode(decode(u))) == decode(u)") {
  auto space = mixed_space();
  Rng rng(23);
  for (int rep = 0; rep < 200; ++rep) {
    UnitVector u(space.dimension());
    for (auto &coord : u) {
      coord = rng.next_double();
    }
    Configuration once = decode(space, u);
    Configuration twice = decode(space, encode(space, once));
    CHECK(once == twice);
  }
}

TEST_CASE("encode output lies in the unit cube") {
  auto space = mixed_space();
  Rng rng(29);
  for (int rep = 0; rep < 100; ++rep) {
    UnitVector u = encode(space, sample_random(space, rng));
    for (double coord : u) {
      CHECK(coord >= 0.0);
      CHECK(coord <= 1.0);
    }
  }
}

TEST_CASE("integer slabs are equal width under half-integer widening") {
  ConfigSpace space({ParamSpec::make_integer("n", 1, 4)});
  // Each integer owns a quarter of the cube: boundaries at 0.25/0.5/0.75.
  CHECK(std::get<std::int64_t>(decode(space, {0.24}).at("n")) == 1);
  CHECK(std::get<std::int64_t>(decode(space, {0.26}).at("n")) == 2);
  CHECK(std::get<std::int64_t>(decode(space, {0.49}).at("n")) == 2);
  CHECK(std::get<std::int64_t>(decode(space, {0.51}).at("n")) == 3);
  CHECK(std::get<std::int64_t>(decode(space, {0.76}).at("n")) == 4);
}

TEST_CASE("sample_random is deterministic per seed and equals a uniform decode") {
  auto space = mixed_space();
  Rng a(31), b(31);
  for (int rep = 0; rep < 20; ++rep) {
    CHECK(sample_random(space, a) == sample_random(space, b));
  }
  Rng c(33), d(33);
  Configuration direct = sample_random(space, c);
  UnitVector u(space.dimension());
  for (auto &coord : u) {
    coord = d.next_double();
  }
  CHECK(direct == decode(space, u));
}

TEST_CASE("categorical sampling frequencies are near uniform") {
  ConfigSpace space({ParamSpec::make_categorical("k", {"a", "b", "c", "d"})});
  Rng rng(37);
  std::map<std::string, int> counts;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    counts[std::get<std::string>(sample_random(space, rng).at("k"))] += 1;
  }
  for (const auto &[choice, count] : counts) {
    double freq = static_cast<double>(count) / n;
    CHECK(freq >= 0.22);
    CHECK(freq <= 0.28);
  }
}

TEST_CASE("fingerprint canonicalizes parameter order") {
  ConfigSpace a({ParamSpec::make_continuous("x", 0.0, 1.0),
                 ParamSpec::make_integer("n", 1, 5)});
  ConfigSpace b({ParamSpec::make_integer("n", 1, 5),
                 ParamSpec::make_continuous("x", 0.0, 1.0)});
  CHECK(fingerprint(a) == fingerprint(b));
}

TEST_CASE("fingerprint distinguishes names and ranges") {
  ConfigSpace base({ParamSpec::make_continuous("x", 0.0, 1.0)});
  ConfigSpace renamed({ParamSpec::make_continuous("y", 0.0, 1.0)});
  ConfigSpace widened({ParamSpec::make_continuous("x", 0.0, 2.0)});
  CHECK(fingerprint(base) != fingerprint(renamed));
  CHECK(fingerprint(base) != fingerprint(widened));
}

TEST_CASE("space_to_json round trips through parse_space") {
  auto space = mixed_space();
  auto again = parse_space(space_to_json(space));
  CHECK(fingerprint(space) == fingerprint(again));
  CHECK(again.param(0).log_scale);
}

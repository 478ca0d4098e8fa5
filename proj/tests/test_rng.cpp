#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "squirrel/rng.hpp"

using namespace squirrel;

TEST_CASE("same seed gives the same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("next_double stays in [0,1)") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("derived seeds differ per name and index") {
  auto a = derive_seed(7, "bo");
  auto b = derive_seed(7, "de_final");
  auto c = derive_seed(8, "bo");
  CHECK(a != b);
  CHECK(a != c);
  CHECK(derive_seed(7, std::uint64_t{0}) != derive_seed(7, std::uint64_t{1}));
  CHECK(derive_seed(7, "bo") == derive_seed(7, "bo"));
}

TEST_CASE("next_index is bounded and covers the range") {
  Rng rng(3);
  std::set<std::size_t> seen;
  for (int i = 0; i < 1000; ++i) {
    std::size_t idx = rng.next_index(7);
    CHECK(idx < 7);
    seen.insert(idx);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("next_normal has sane moments") {
  Rng rng(5);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = rng.next_normal();
    sum += z;
    sum_sq += z * z;
  }
  double mean = sum / n;
  double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("sample_distinct draws distinct indices and honors exclusions") {
  Rng rng(9);
  auto picks = rng.sample_distinct(10, 4, {3});
  CHECK(picks.size() == 4);
  std::set<std::size_t> unique(picks.begin(), picks.end());
  CHECK(unique.size() == 4);
  CHECK(unique.count(3) == 0);
  CHECK_THROWS(rng.sample_distinct(3, 3, {0}));
}

TEST_CASE("shuffle permutes") {
  Rng rng(11);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
  auto orig = v;
  rng.shuffle(v);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == orig);
}

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace squirrel {

/// Derive an independent child seed from a base seed and a stream name.
/// Deterministic; used to give every stage its own named substream so that
/// changing one stage's internals never perturbs another's randomness.
std::uint64_t derive_seed(std::uint64_t base, std::string_view name);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Deterministic random stream (xoshiro256++ seeded via splitmix64).
/// The standard library engines are avoided for value-generating draws:
/// std::*_distribution output is implementation-defined, and the suggestion
/// stream must be reproducible bit-for-bit.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double next_double();

  /// Standard normal via inverse-CDF; never returns +-inf.
  double next_normal();

  /// Unbiased uniform integer in [0, n). n must be positive.
  std::size_t next_index(std::size_t n);

  /// Child stream; advances this stream by one draw.
  Rng fork();

  /// Fisher-Yates shuffle.
  template <typename T> void shuffle(std::vector<T> &items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = next_index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

  /// k distinct indices drawn uniformly from {0..n-1} minus `exclude`
  /// entries; order is the draw order.
  std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k,
                                           const std::vector<std::size_t> &exclude = {});

private:
  std::uint64_t state_[4];
};

} // namespace squirrel

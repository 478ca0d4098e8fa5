#include "squirrel/rng.hpp"

#include <algorithm>
#include <stdexcept>

#include "squirrel/normal.hpp"

namespace squirrel {

namespace {

std::uint64_t splitmix64(std::uint64_t &state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t base, std::string_view name) {
  std::uint64_t s = base ^ fnv1a64(name);
  return splitmix64(s);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t s = base ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  return splitmix64(s);
}

Rng::Rng(std::uint64_t seed) {
  for (auto &word : state_) {
    word = splitmix64(seed);
  }
}

std::uint64_t Rng::next_u64() {
  std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_normal() {
  // (0, 1) open interval so the quantile is always finite.
  double u = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  return norm_quantile(u);
}

std::size_t Rng::next_index(std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("Rng::next_index: n must be positive");
  }
  // Lemire's unbiased bounded draw.
  std::uint64_t range = n;
  std::uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

Rng Rng::fork() { return Rng(next_u64()); }

std::vector<std::size_t>
Rng::sample_distinct(std::size_t n, std::size_t k,
                     const std::vector<std::size_t> &exclude) {
  std::vector<std::size_t> pool;
  pool.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::find(exclude.begin(), exclude.end(), i) == exclude.end()) {
      pool.push_back(i);
    }
  }
  if (k > pool.size()) {
    throw std::invalid_argument("Rng::sample_distinct: not enough candidates");
  }
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t drawn = 0; drawn < k; ++drawn) {
    std::size_t j = next_index(pool.size());
    out.push_back(pool[j]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
  }
  return out;
}

} // namespace squirrel

#include "squirrel/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "squirrel/errors.hpp"
#include "squirrel/normal.hpp"

namespace squirrel {

const char *to_string(TransformKind kind) {
  switch (kind) {
  case TransformKind::identity:
    return "identity";
  case TransformKind::log:
    return "log";
  case TransformKind::copula:
    return "copula";
  }
  return "?";
}

TransformKind transform_kind_from_string(const std::string &s) {
  if (s == "identity")
    return TransformKind::identity;
  if (s == "log")
    return TransformKind::log;
  if (s == "copula")
    return TransformKind::copula;
  throw ConfigError("unknown transform kind '" + s + "'");
}

TransformResult apply_transform(TransformKind kind,
                                const std::vector<double> &y) {
  if (y.empty()) {
    throw std::invalid_argument("apply_transform: empty input");
  }
  for (double v : y) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("apply_transform: values must be finite");
    }
  }

  TransformResult out;
  out.state.kind = kind;

  switch (kind) {
  case TransformKind::identity:
    out.z = y;
    break;

  case TransformKind::log: {
    auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    double lo = *lo_it;
    double hi = *hi_it;
    double delta = std::max(1e-6, 1e-4 * (hi - lo));
    out.state.log_min = lo;
    out.state.log_delta = delta;
    out.z.reserve(y.size());
    for (double v : y) {
      out.z.push_back(std::log(v - lo + delta));
    }
    break;
  }

  case TransformKind::copula: {
    // Rank-based gaussianization with average ranks on ties; the winsorized
    // quantile (r - 0.5)/n keeps the normal quantile finite.
    std::size_t n = y.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });

    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && y[order[j + 1]] == y[order[i]]) {
        ++j;
      }
      // 1-based positions i+1 .. j+1 share the average rank.
      double avg = 0.5 * static_cast<double>(i + 1 + j + 1);
      for (std::size_t k = i; k <= j; ++k) {
        rank[order[k]] = avg;
      }
      i = j + 1;
    }

    out.z.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      out.z[k] = norm_quantile((rank[k] - 0.5) / static_cast<double>(n));
    }

    auto &pairs = out.state.sorted_pairs;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t idx = order[k];
      if (pairs.empty() || pairs.back().first != y[idx]) {
        pairs.emplace_back(y[idx], out.z[idx]);
      }
    }
    break;
  }
  }
  return out;
}

double invert_transform(const TransformState &state, double z) {
  switch (state.kind) {
  case TransformKind::identity:
    return z;

  case TransformKind::log:
    return std::exp(z) + state.log_min - state.log_delta;

  case TransformKind::copula: {
    const auto &pairs = state.sorted_pairs;
    if (pairs.empty()) {
      throw std::invalid_argument("invert_transform: copula state is empty");
    }
    if (z <= pairs.front().second) {
      return pairs.front().first;
    }
    if (z >= pairs.back().second) {
      return pairs.back().first;
    }
    auto it = std::lower_bound(
        pairs.begin(), pairs.end(), z,
        [](const std::pair<double, double> &p, double v) { return p.second < v; });
    const auto &[y1, z1] = *it;
    const auto &[y0, z0] = *(it - 1);
    double t = (z - z0) / (z1 - z0);
    return y0 + t * (y1 - y0);
  }
  }
  return z;
}

} // namespace squirrel

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace squirrel {

enum class TransformKind { identity, log, copula };

const char *to_string(TransformKind kind);
TransformKind transform_kind_from_string(const std::string &s);

/// Everything needed to invert a fitted transform. For log that is the shift
/// (min_y, delta); for copula the (raw y, z) knots of the monotone
/// interpolant, strictly increasing in raw y after tie-averaging.
struct TransformState {
  TransformKind kind = TransformKind::identity;
  double log_min = 0.0;
  double log_delta = 0.0;
  std::vector<std::pair<double, double>> sorted_pairs;

  /// Log only: map a raw value through the transform's shift (stays in the
  /// positive pre-log domain). Needed by the log-space expected improvement.
  double shifted(double raw) const { return raw - log_min + log_delta; }
};

struct TransformResult {
  std::vector<double> z;
  TransformState state;
};

/// Warp raw objective values before a surrogate fit. Rank-preserving for all
/// kinds; y must be non-empty and finite (history imputation upstream
/// guarantees this).
TransformResult apply_transform(TransformKind kind,
                                const std::vector<double> &y);

/// Approximate inverse, used only to turn predicted means back into
/// raw-space fantasy values. Exact for identity and log; copula is
/// piecewise-linear between training knots and clamps outside them.
double invert_transform(const TransformState &state, double z);

} // namespace squirrel

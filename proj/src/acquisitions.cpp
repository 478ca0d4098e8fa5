#include "squirrel/acquisitions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "squirrel/errors.hpp"
#include "squirrel/normal.hpp"

namespace squirrel {

const char *to_string(AcqType type) {
  switch (type) {
  case AcqType::ei:
    return "ei";
  case AcqType::log_ei:
    return "log_ei";
  case AcqType::pi:
    return "pi";
  case AcqType::lcb:
    return "lcb";
  }
  return "?";
}

AcqType acq_type_from_string(const std::string &s) {
  if (s == "ei")
    return AcqType::ei;
  if (s == "log_ei")
    return AcqType::log_ei;
  if (s == "pi")
    return AcqType::pi;
  if (s == "lcb")
    return AcqType::lcb;
  throw ConfigError("unknown acquisition kind '" + s + "'");
}

double acq_score(const AcqKind &kind, double mean, double variance,
                 double f_best) {
  if (variance < 0.0) {
    throw std::invalid_argument("acq_score: negative variance");
  }
  if (!std::isfinite(mean) || !std::isfinite(variance) ||
      !std::isfinite(f_best)) {
    throw std::invalid_argument("acq_score: non-finite input");
  }

  double sigma = std::sqrt(variance);
  switch (kind.type) {
  case AcqType::ei: {
    if (sigma == 0.0) {
      return std::max(f_best - mean, 0.0);
    }
    double u = (f_best - mean) / sigma;
    return std::max(sigma * (u * norm_cdf(u) + norm_pdf(u)), 0.0);
  }

  case AcqType::pi: {
    if (sigma == 0.0) {
      return mean < f_best ? 1.0 : 0.0;
    }
    return norm_cdf((f_best - mean) / sigma);
  }

  case AcqType::lcb: {
    if (!(kind.kappa > 0.0) || !std::isfinite(kind.kappa)) {
      throw std::invalid_argument("acq_score: lcb kappa must be positive");
    }
    return -(mean - kind.kappa * sigma);
  }

  case AcqType::log_ei: {
    // The model is fitted on log-shifted targets; f_best arrives already
    // shifted into the positive pre-log domain. Improvement is measured
    // against exp of the predictive distribution (log-normal EI).
    if (!(f_best > 0.0)) {
      throw std::invalid_argument(
          "acq_score: log_ei needs a shifted incumbent > 0");
    }
    if (sigma == 0.0) {
      return std::max(f_best - std::exp(mean), 0.0);
    }
    double v = (std::log(f_best) - mean) / sigma;
    double tail = norm_cdf(v - sigma);
    double second = tail == 0.0 ? 0.0 : std::exp(mean + 0.5 * variance) * tail;
    double score = f_best * norm_cdf(v) - second;
    if (std::isnan(score)) {
      return -std::numeric_limits<double>::infinity();
    }
    return std::max(score, 0.0);
  }
  }
  throw std::invalid_argument("acq_score: unknown kind");
}

} // namespace squirrel

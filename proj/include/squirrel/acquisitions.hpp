#pragma once

#include <string>

namespace squirrel {

enum class AcqType { ei, log_ei, pi, lcb };

const char *to_string(AcqType type);
AcqType acq_type_from_string(const std::string &s);

struct AcqKind {
  AcqType type = AcqType::ei;
  double kappa = 2.0; // lcb only
};

/// Desirability of a predictive (mean, variance) against the incumbent;
/// every kind returns a maximize-me score (LCB is negated).
///
/// f_best is the incumbent in the same transformed space as mean, except for
/// log_ei where it is the raw incumbent mapped through the log transform's
/// shift (so it is positive and the model's targets are its logarithm).
double acq_score(const AcqKind &kind, double mean, double variance,
                 double f_best);

} // namespace squirrel

#pragma once

namespace squirrel {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal CDF, accurate to machine precision via erfc.
double norm_cdf(double x);

/// Inverse of norm_cdf on (0, 1). Rational approximation refined by one
/// Halley step; absolute error is below 1e-13 over the full open interval.
double norm_quantile(double p);

} // namespace squirrel

#pragma once

namespace xedrel {

// Standard normal density phi(x).
double std_normal_pdf(double x);

// Standard normal CDF Phi(x) via Cody's rational erfc approximation
// (W. J. Cody, "Rational Chebyshev approximation for the error function",
// Math. Comp. 23, 1969). Absolute error bounded by 1e-12 over the full
// range (observed ~1e-15); saturates smoothly into (0, 1) for extreme x.
double std_normal_cdf(double x);

// Inverse of std_normal_cdf for p in (0, 1). Acklam's rational initial
// estimate refined by one Halley step against std_normal_cdf; absolute
// error below 1e-13 away from the extreme tails.
double std_normal_quantile(double p);

}  // namespace xedrel

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "xedrel/bounds.hpp"
#include "xedrel/device.hpp"

namespace xedrel {

/// Reliability P(C/D >= theta) with both capacity and demand uniform over
/// their declared bounds. Exact closed form from the full case analysis:
/// the demand axis is split at C_min/theta and C_max/theta into a
/// probability-1 strip, a linear strip, and a probability-0 strip, each
/// integrated in closed form. Nonincreasing in theta, result in [0, 1].
double reliability_mi(const Bounds& capacity, const Bounds& demand, QosThreshold theta);

/// The published simplified closed form, valid only when theta*D_min >=
/// C_min (no probability-1 strip) and the demand range meets
/// min(D_max, C_max/theta). Kept as an independent cross-check of
/// reliability_mi; throws std::domain_error outside its preconditions.
double reliability_mi_simplified(const Bounds& capacity, const Bounds& demand, QosThreshold theta);

/// d/dtheta of reliability_mi, exact piecewise form.
double reliability_mi_dtheta(const Bounds& capacity, const Bounds& demand, double theta);

/// Reliability with truncated-normal capacity and demand, by adaptive
/// quadrature of f_D(d) * P(C >= theta*d) over the demand bounds. The
/// inner max(C_min, theta*d) is handled by survival-function semantics,
/// so no simplifying assumption on theta is needed.
double reliability_hist(const TruncNormModel& capacity, const TruncNormModel& demand,
                        QosThreshold theta);

/// The split closed form valid when C_min <= theta*d <= C_max across the
/// whole demand range: a Phi term minus a phi*Phi integral, normalized by
/// both truncation constants (the upper condition keeps the form's inner
/// integration range nonempty). Cross-check only; throws
/// std::domain_error outside the preconditions.
double reliability_hist_split(const TruncNormModel& capacity, const TruncNormModel& demand,
                               QosThreshold theta);

/// Single-device reliability under whatever regime the marginals are in:
/// exact closed form when both are uniform, quadrature otherwise (mixed
/// regimes share the quadrature path).
double device_reliability(const DeviceModel& device, QosThreshold theta);

/// d/dtheta of device_reliability: analytic for the uniform/uniform case,
/// Richardson-extrapolated central differences otherwise.
double device_reliability_dtheta(const DeviceModel& device, double theta);

/// Pointwise reliability over a strictly increasing theta grid. Grid
/// points evaluate independently (and may run in parallel); output order
/// follows the input grid. A failing point is reported with its theta.
std::vector<std::pair<double, double>> reliability_curve(const DeviceModel& device,
                                                         std::span<const double> thetas);

namespace detail {
// Shared quadrature core: integrates demand-density times capacity
// survival at theta*d, with the flat pieces handled analytically.
double reliability_by_quadrature(const ScalarModel& capacity, const ScalarModel& demand,
                                 double theta, double abs_tol);
}  // namespace detail

}  // namespace xedrel

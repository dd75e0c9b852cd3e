#include "xedrel/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "xedrel/normal.hpp"
#include "xedrel/quadrature.hpp"

namespace xedrel {

namespace {

constexpr double kHistAbsTol = 1e-8;
// Tighter tolerance when the value feeds a finite-difference derivative,
// so quadrature noise does not dominate the difference quotient.
constexpr double kDerivAbsTol = 1e-11;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double reliability_mi(const Bounds& capacity, const Bounds& demand, QosThreshold theta) {
    const double th = theta.value();
    const double c0 = capacity.lo, c1 = capacity.hi;
    const double d0 = demand.lo, d1 = demand.hi;

    // Demand-axis breakpoints where the capacity survival changes regime.
    const double brk_full = c0 / th;  // below: P(C >= th*d) = 1
    const double brk_zero = c1 / th;  // above: P(C >= th*d) = 0

    const double full_hi = std::clamp(brk_full, d0, d1);
    const double strip_full = full_hi - d0;

    const double a = std::clamp(brk_full, d0, d1);
    const double b = std::clamp(brk_zero, d0, d1);
    double strip_linear = 0.0;
    if (b > a) {
        // Integral of (c1 - th*d)/(c1 - c0) over [a, b].
        strip_linear = (c1 * (b - a) - 0.5 * th * (b * b - a * a)) / (c1 - c0);
    }
    return clamp01((strip_full + strip_linear) / (d1 - d0));
}

double reliability_mi_simplified(const Bounds& capacity, const Bounds& demand, QosThreshold theta) {
    const double th = theta.value();
    const double c0 = capacity.lo, c1 = capacity.hi;
    const double d0 = demand.lo, d1 = demand.hi;

    if (th * d0 < c0) {
        throw std::domain_error(
            "reliability_mi_simplified: precondition theta*D_min >= C_min violated");
    }
    const double du = std::min(d1, c1 / th);
    if (du < d0) {
        throw std::domain_error("reliability_mi_simplified: empty demand integration range");
    }
    const double upper = c1 * du - 0.5 * th * du * du;
    const double lower = c1 * d0 - 0.5 * th * d0 * d0;
    return (upper - lower) / ((c1 - c0) * (d1 - d0));
}

double reliability_mi_dtheta(const Bounds& capacity, const Bounds& demand, double theta) {
    if (!(theta > 0.0)) {
        throw std::invalid_argument("reliability_mi_dtheta: theta must be > 0");
    }
    const double a = std::clamp(capacity.lo / theta, demand.lo, demand.hi);
    const double b = std::clamp(capacity.hi / theta, demand.lo, demand.hi);
    return -0.5 * (b * b - a * a) / (demand.range() * capacity.range());
}

namespace detail {

double reliability_by_quadrature(const ScalarModel& capacity, const ScalarModel& demand,
                                 double theta, double abs_tol) {
    const Bounds& cb = model_bounds(capacity);
    const Bounds& db = model_bounds(demand);

    const double brk_full = cb.lo / theta;
    const double brk_zero = cb.hi / theta;

    // Flat piece: P(C >= theta*d) = 1 for d <= brk_full; exact via the
    // demand CDF, no quadrature needed.
    const double full_hi = std::clamp(brk_full, db.lo, db.hi);
    double result = model_cdf(demand, full_hi);  // CDF at db.lo is 0

    const double a = full_hi;
    const double b = std::clamp(brk_zero, db.lo, db.hi);
    if (b > a) {
        auto integrand = [&](double d) {
            return model_pdf(demand, d) * model_survival(capacity, theta * d);
        };
        std::ostringstream ctx;
        ctx << "reliability quadrature at theta=" << theta;
        result += integrate_adaptive(integrand, a, b, abs_tol, 2000, ctx.str()).value;
    }
    return std::clamp(result, 0.0, 1.0);
}

}  // namespace detail

double reliability_hist(const TruncNormModel& capacity, const TruncNormModel& demand,
                        QosThreshold theta) {
    return detail::reliability_by_quadrature(ScalarModel{capacity}, ScalarModel{demand},
                                             theta.value(), kHistAbsTol);
}

double reliability_hist_split(const TruncNormModel& capacity, const TruncNormModel& demand,
                               QosThreshold theta) {
    const double th = theta.value();
    const Bounds& cb = capacity.bounds();
    const Bounds& db = demand.bounds();
    if (th * db.lo < cb.lo) {
        throw std::domain_error(
            "reliability_hist_split: precondition theta*D_min >= C_min violated");
    }
    // The split form's inner integral runs from theta*d up to C_max; the
    // expression stops matching the probability once that range empties.
    if (th * db.hi > cb.hi) {
        throw std::domain_error(
            "reliability_hist_split: theta*D_max exceeds C_max, the split form's "
            "inner integration range would be empty for part of the demand range");
    }

    const double mu_c = capacity.mu(), sg_c = capacity.sigma();
    const double mu_d = demand.mu(), sg_d = demand.sigma();
    const double z_c = capacity.normalizer(), z_d = demand.normalizer();

    const double phi_cmax = std_normal_cdf((cb.hi - mu_c) / sg_c);
    auto integrand = [&](double d) {
        return std_normal_pdf((d - mu_d) / sg_d) * std_normal_cdf((th * d - mu_c) / sg_c);
    };
    const double integral =
        integrate_adaptive(integrand, db.lo, db.hi, kHistAbsTol, 2000,
                           "split-form quadrature at theta=" + std::to_string(th))
            .value;
    return (phi_cmax * z_d - integral / sg_d) / (z_c * z_d);
}

double device_reliability(const DeviceModel& device, QosThreshold theta) {
    if (is_uniform(device.capacity) && is_uniform(device.demand)) {
        return reliability_mi(model_bounds(device.capacity), model_bounds(device.demand), theta);
    }
    return detail::reliability_by_quadrature(device.capacity, device.demand, theta.value(),
                                             kHistAbsTol);
}

double device_reliability_dtheta(const DeviceModel& device, double theta) {
    if (!(theta > 0.0)) {
        throw std::invalid_argument("device_reliability_dtheta: theta must be > 0");
    }
    if (is_uniform(device.capacity) && is_uniform(device.demand)) {
        return reliability_mi_dtheta(model_bounds(device.capacity), model_bounds(device.demand),
                                     theta);
    }
    // Central differences with one Richardson extrapolation step.
    const double h = 1e-5 * theta;
    auto r = [&](double t) {
        return detail::reliability_by_quadrature(device.capacity, device.demand, t,
                                                 kDerivAbsTol);
    };
    const double d_h = (r(theta + h) - r(theta - h)) / (2.0 * h);
    const double d_h2 = (r(theta + 0.5 * h) - r(theta - 0.5 * h)) / h;
    return (4.0 * d_h2 - d_h) / 3.0;
}

std::vector<std::pair<double, double>> reliability_curve(const DeviceModel& device,
                                                         std::span<const double> thetas) {
    if (thetas.empty()) {
        throw std::invalid_argument("reliability_curve: empty theta grid");
    }
    for (std::size_t i = 0; i + 1 < thetas.size(); ++i) {
        if (!(thetas[i] < thetas[i + 1])) {
            throw std::invalid_argument("reliability_curve: grid must be strictly increasing");
        }
    }

    std::vector<std::pair<double, double>> out(thetas.size());
    std::string first_error;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(thetas.size()); ++i) {
        try {
            out[i] = {thetas[i], device_reliability(device, QosThreshold(thetas[i]))};
        } catch (const std::exception& e) {
#pragma omp critical
            if (first_error.empty()) {
                first_error = "reliability_curve failed at theta=" +
                              std::to_string(thetas[i]) + ": " + e.what();
            }
        }
    }
    if (!first_error.empty()) {
        throw std::runtime_error(first_error);
    }
    return out;
}

}  // namespace xedrel

#include "xedrel/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "xedrel/normal.hpp"

namespace xedrel {

namespace {

constexpr double kLogSqrt2Pi = 0.9189385332046727417803297;
constexpr double kGradTol = 1e-7;       // internal stopping threshold
constexpr double kConvergedNorm = 1e-6; // reported convergence contract
constexpr int kMaxIterations = 200;

struct GradEval {
    double loglik_mean;  // mean log-likelihood over samples
    double g_mu;         // d/d mu of the mean log-likelihood
    double g_v;          // d/d v, v = log sigma
};

// Mean log-likelihood and its analytic gradient at (mu, sigma).
GradEval eval_gradient(std::span<const double> samples, double mu, double sigma,
                       const Bounds& bounds) {
    const double n = static_cast<double>(samples.size());
    const double abar = (bounds.lo - mu) / sigma;
    const double bbar = (bounds.hi - mu) / sigma;
    const double z = std_normal_cdf(bbar) - std_normal_cdf(abar);

    double sum = 0.0, sum_sq = 0.0;
    for (double x : samples) {
        sum += x - mu;
        sum_sq += (x - mu) * (x - mu);
    }
    const double m1 = sum / n;
    const double m2 = sum_sq / n;

    GradEval out;
    out.loglik_mean = -std::log(sigma) - std::log(z) - 0.5 * m2 / (sigma * sigma) - kLogSqrt2Pi;
    const double phi_a = std_normal_pdf(abar);
    const double phi_b = std_normal_pdf(bbar);
    out.g_mu = m1 / (sigma * sigma) - (phi_a - phi_b) / (sigma * z);
    out.g_v = -1.0 + m2 / (sigma * sigma) - (abar * phi_a - bbar * phi_b) / z;
    return out;
}

// Gradient norm in standardized units: mu measured in ranges, sigma in
// log units. Scale-free in both the data and the sample count.
double standardized_norm(const GradEval& g, double range) {
    const double gu = g.g_mu * range;
    return std::sqrt(gu * gu + g.g_v * g.g_v);
}

}  // namespace

ObservationTrace::ObservationTrace(std::vector<double> samples_, Bounds bounds_,
                                   std::optional<std::vector<long>> frame_index_)
    : samples(std::move(samples_)), bounds(bounds_), frame_index(std::move(frame_index_)) {
    validate_rate_bounds(bounds, "ObservationTrace");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!bounds.contains(samples[i])) {
            throw std::invalid_argument(
                "ObservationTrace: sample " + std::to_string(i) + " = " +
                std::to_string(samples[i]) + " lies outside declared bounds [" +
                std::to_string(bounds.lo) + ", " + std::to_string(bounds.hi) + "]");
        }
    }
    if (frame_index && frame_index->size() != samples.size()) {
        throw std::invalid_argument("ObservationTrace: frame_index length mismatch");
    }
}

MomentsInit moments_init(const ObservationTrace& trace) {
    const double range = trace.bounds.range();
    if (trace.samples.empty()) {
        return {trace.bounds.midpoint(), range / std::sqrt(12.0)};
    }
    const double n = static_cast<double>(trace.samples.size());
    const double mean = std::accumulate(trace.samples.begin(), trace.samples.end(), 0.0) / n;
    double sd = 0.0;
    if (trace.samples.size() >= 2) {
        double ss = 0.0;
        for (double x : trace.samples) ss += (x - mean) * (x - mean);
        sd = std::sqrt(ss / (n - 1.0));
    }
    return {mean, std::max(sd, range / 1000.0)};
}

double truncnorm_loglik(std::span<const double> samples, double mu, double sigma,
                        const Bounds& bounds) {
    const double abar = (bounds.lo - mu) / sigma;
    const double bbar = (bounds.hi - mu) / sigma;
    const double z = std_normal_cdf(bbar) - std_normal_cdf(abar);
    double ll = 0.0;
    for (double x : samples) {
        const double t = (x - mu) / sigma;
        ll += -0.5 * t * t;
    }
    const double n = static_cast<double>(samples.size());
    return ll - n * (std::log(sigma) + std::log(z) + kLogSqrt2Pi);
}

FitResult fit_truncnorm_mle_from(const ObservationTrace& trace, double mu0, double sigma0) {
    const auto& xs = trace.samples;
    if (xs.size() < 2) {
        throw std::invalid_argument("fit_truncnorm_mle: need at least 2 samples, got " +
                                    std::to_string(xs.size()));
    }
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    if (*mn == *mx) {
        throw std::invalid_argument(
            "fit_truncnorm_mle: degenerate trace (all samples equal " + std::to_string(*mn) +
            "); the likelihood has no interior maximum, use moments_init instead");
    }

    const double range = trace.bounds.range();
    const double v_lo = std::log(range / 1e6);
    const double v_hi = std::log(range * 1e6);

    double mu = mu0;
    double v = std::log(std::clamp(sigma0, range / 1e6, range * 1e6));

    GradEval g = eval_gradient(xs, mu, std::exp(v), trace.bounds);
    int iter = 0;
    const double h_mu = 1e-6 * range;
    const double h_v = 1e-6;

    while (iter < kMaxIterations && standardized_norm(g, range) > kGradTol) {
        ++iter;
        const double sigma = std::exp(v);

        // Central-difference Hessian of the analytic gradient.
        const GradEval gm_p = eval_gradient(xs, mu + h_mu, sigma, trace.bounds);
        const GradEval gm_m = eval_gradient(xs, mu - h_mu, sigma, trace.bounds);
        const GradEval gv_p = eval_gradient(xs, mu, std::exp(v + h_v), trace.bounds);
        const GradEval gv_m = eval_gradient(xs, mu, std::exp(v - h_v), trace.bounds);
        double h_mm = (gm_p.g_mu - gm_m.g_mu) / (2.0 * h_mu);
        double h_mv = (gv_p.g_mu - gv_m.g_mu) / (2.0 * h_v);
        double h_vv = (gv_p.g_v - gv_m.g_v) / (2.0 * h_v);

        // Levenberg damping keeps the step an ascent direction when the
        // Hessian is not negative definite (flat sigma ridge).
        double lambda = 0.0;
        double step_mu = 0.0, step_v = 0.0;
        for (int attempt = 0; attempt < 12; ++attempt) {
            const double a11 = -(h_mm - lambda);
            const double a12 = -h_mv;
            const double a22 = -(h_vv - lambda);
            const double det = a11 * a22 - a12 * a12;
            if (det > 0.0 && a11 > 0.0) {
                step_mu = (a22 * g.g_mu - a12 * g.g_v) / det;
                step_v = (a11 * g.g_v - a12 * g.g_mu) / det;
                break;
            }
            lambda = lambda == 0.0 ? std::max(1.0, std::fabs(h_mm) + std::fabs(h_vv)) * 1e-3
                                   : lambda * 10.0;
        }
        if (step_mu == 0.0 && step_v == 0.0) {
            // Plain scaled gradient ascent as a last resort.
            step_mu = g.g_mu * range * range;
            step_v = g.g_v;
        }

        // Backtracking line search on the mean log-likelihood.
        double t = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls) {
            const double mu_try = mu + t * step_mu;
            const double v_try = std::clamp(v + t * step_v, v_lo, v_hi);
            const GradEval g_try = eval_gradient(xs, mu_try, std::exp(v_try), trace.bounds);
            if (std::isfinite(g_try.loglik_mean) && g_try.loglik_mean > g.loglik_mean) {
                mu = mu_try;
                v = v_try;
                g = g_try;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) break;  // no ascent step found; report best so far
    }

    const double sigma = std::exp(v);
    const bool converged = standardized_norm(g, range) <= kConvergedNorm;
    return FitResult{TruncNormModel(mu, sigma, trace.bounds),
                     truncnorm_loglik(xs, mu, sigma, trace.bounds), xs.size(), converged, iter};
}

FitResult fit_truncnorm_mle(const ObservationTrace& trace) {
    const MomentsInit init = moments_init(trace);
    return fit_truncnorm_mle_from(trace, init.mu0, init.sigma0);
}

OnlineFit::OnlineFit(Bounds bounds) : bounds_(bounds) {
    validate_rate_bounds(bounds_, "OnlineFit");
    mu_ = bounds_.midpoint();
    sigma_ = bounds_.range() / std::sqrt(12.0);
}

void OnlineFit::update(double sample) {
    if (!bounds_.contains(sample)) {
        throw std::invalid_argument("OnlineFit: sample " + std::to_string(sample) +
                                    " outside declared bounds [" + std::to_string(bounds_.lo) +
                                    ", " + std::to_string(bounds_.hi) + "]; state unchanged");
    }
    samples_.push_back(sample);
    if (samples_.size() == 1) {
        mu_ = sample;  // sigma stays at the uniform prior
        return;
    }
    const auto [mn, mx] = std::minmax_element(samples_.begin(), samples_.end());
    if (*mn == *mx) {
        // MLE undefined until the trace carries any spread; track the mean.
        mu_ = sample;
        return;
    }
    ObservationTrace trace(samples_, bounds_);
    FitResult fit = samples_.size() == 2 || !last_fit_
                        ? fit_truncnorm_mle(trace)
                        : fit_truncnorm_mle_from(trace, mu_, sigma_);
    mu_ = fit.model.mu();
    sigma_ = fit.model.sigma();
    last_fit_ = std::move(fit);
}

const FitResult& OnlineFit::fit() const {
    if (!last_fit_) {
        throw std::logic_error("OnlineFit::fit: no fit available (need >= 2 distinct samples)");
    }
    return *last_fit_;
}

}  // namespace xedrel

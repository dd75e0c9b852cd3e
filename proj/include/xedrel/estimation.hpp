#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "xedrel/bounds.hpp"
#include "xedrel/distributions.hpp"

namespace xedrel {

// A history of capacity or demand observations inside declared bounds.
// Samples outside the bounds are rejected at construction: the bounds are
// physical constraints, a sample beyond them is a measurement error.
struct ObservationTrace {
    std::vector<double> samples;
    Bounds bounds;
    std::optional<std::vector<long>> frame_index;

    ObservationTrace(std::vector<double> samples_, Bounds bounds_,
                     std::optional<std::vector<long>> frame_index_ = std::nullopt);
};

struct MomentsInit {
    double mu0;
    double sigma0;
};

/// Uniform-assumption initialization: with no samples, (midpoint,
/// range/sqrt(12)); with samples, (mean, sample std floored at
/// range/1000).
MomentsInit moments_init(const ObservationTrace& trace);

struct FitResult {
    TruncNormModel model;
    double loglik;
    std::size_t n_samples;
    bool converged;  // gradient of the mean log-likelihood, in units of
                     // (mu/range, log sigma), has norm <= 1e-6
    int iterations;
};

/// Truncated-normal log-likelihood of the samples at (mu, sigma) with the
/// given bounds. Exposed for tests and the online accumulator.
double truncnorm_loglik(std::span<const double> samples, double mu, double sigma,
                        const Bounds& bounds);

/// Maximum-likelihood fit of (mu, sigma) for a truncated normal on the
/// trace bounds. Damped Newton ascent on (mu, log sigma) starting from
/// moments_init; sigma is box-constrained to [range/1e6, range*1e6].
/// Requires n >= 2; all-equal samples are rejected with a pointer to the
/// moments fallback. Non-convergence returns converged=false with the
/// best iterate rather than throwing.
FitResult fit_truncnorm_mle(const ObservationTrace& trace);

/// As fit_truncnorm_mle but warm-started from explicit parameters.
FitResult fit_truncnorm_mle_from(const ObservationTrace& trace, double mu0, double sigma0);

// Single-writer running fit: append samples one at a time and keep MLE
// parameters current. Refits from a warm start at every update, so after
// n updates the state matches a batch fit of the same n samples. Until
// two samples exist the MLE is undefined: with none the uniform prior is
// reported, with one the mean moves to the sample and sigma stays at the
// prior value.
class OnlineFit {
public:
    explicit OnlineFit(Bounds bounds);

    // Out-of-bounds samples throw and leave the state unchanged.
    void update(double sample);

    std::size_t size() const { return samples_.size(); }
    double mu() const { return mu_; }
    double sigma() const { return sigma_; }
    const Bounds& bounds() const { return bounds_; }

    // Full fit diagnostics; requires n >= 2.
    const FitResult& fit() const;

private:
    Bounds bounds_;
    std::vector<double> samples_;
    double mu_;
    double sigma_;
    std::optional<FitResult> last_fit_;
};

}  // namespace xedrel

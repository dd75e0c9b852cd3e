#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "xedrel/bounds.hpp"
#include "xedrel/rng.hpp"

namespace xedrel {

// Uniform distribution over declared bounds; the zero-knowledge model.
class UniformModel {
public:
    explicit UniformModel(Bounds bounds) : bounds_(bounds) {}

    double pdf(double x) const {
        return bounds_.contains(x) ? 1.0 / bounds_.range() : 0.0;
    }
    double cdf(double x) const {
        if (x <= bounds_.lo) return 0.0;
        if (x >= bounds_.hi) return 1.0;
        return (x - bounds_.lo) / bounds_.range();
    }
    double survival(double x) const { return 1.0 - cdf(x); }
    double sample(Rng& rng) const {
        return bounds_.lo + rng.next_double() * bounds_.range();
    }

    const Bounds& bounds() const { return bounds_; }
    double mean() const { return bounds_.midpoint(); }

private:
    Bounds bounds_;
};

// Normal(mu, sigma) truncated to declared bounds; the history-informed
// model. mu/sigma are the parent normal's parameters, not the truncated
// moments. Construction fails if the parent mass inside the bounds
// underflows below kMinNormalizer: every downstream density would divide
// by a meaningless normalizer.
class TruncNormModel {
public:
    static constexpr double kMinNormalizer = 1e-12;

    TruncNormModel(double mu, double sigma, Bounds bounds);

    double pdf(double x) const;
    double cdf(double x) const;
    double survival(double x) const { return 1.0 - cdf(x); }
    // Inverse-CDF transform of one uniform draw: bounded, deterministic
    // per-draw cost, so traces replay exactly.
    double sample(Rng& rng) const;

    const Bounds& bounds() const { return bounds_; }
    double mu() const { return mu_; }
    double sigma() const { return sigma_; }
    double normalizer() const { return z_; }

private:
    double mu_;
    double sigma_;
    Bounds bounds_;
    double cdf_lo_;  // Phi((lo-mu)/sigma)
    double cdf_hi_;  // Phi((hi-mu)/sigma)
    double z_;       // cdf_hi_ - cdf_lo_
};

// A capacity or demand marginal under either information regime.
using ScalarModel = std::variant<UniformModel, TruncNormModel>;

double model_pdf(const ScalarModel& m, double x);
double model_cdf(const ScalarModel& m, double x);
double model_survival(const ScalarModel& m, double x);
double model_sample(const ScalarModel& m, Rng& rng);
const Bounds& model_bounds(const ScalarModel& m);
bool is_uniform(const ScalarModel& m);

// n i.i.d. draws; identical sequence for an identical rng state.
std::vector<double> sample_n(const ScalarModel& m, Rng& rng, std::size_t n);

}  // namespace xedrel

#include "xedrel/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "xedrel/normal.hpp"

namespace xedrel {

TruncNormModel::TruncNormModel(double mu, double sigma, Bounds bounds)
    : mu_(mu), sigma_(sigma), bounds_(bounds) {
    if (!std::isfinite(mu)) {
        throw std::invalid_argument("TruncNormModel: mu must be finite");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("TruncNormModel: sigma must be positive, got " +
                                    std::to_string(sigma));
    }
    cdf_lo_ = std_normal_cdf((bounds_.lo - mu_) / sigma_);
    cdf_hi_ = std_normal_cdf((bounds_.hi - mu_) / sigma_);
    z_ = cdf_hi_ - cdf_lo_;
    if (!(z_ >= kMinNormalizer)) {
        throw std::invalid_argument(
            "TruncNormModel: normalizer underflow, parent normal mass inside [" +
            std::to_string(bounds_.lo) + ", " + std::to_string(bounds_.hi) + "] is " +
            std::to_string(z_) + " for mu=" + std::to_string(mu) +
            " sigma=" + std::to_string(sigma));
    }
}

double TruncNormModel::pdf(double x) const {
    if (!bounds_.contains(x)) return 0.0;
    return std_normal_pdf((x - mu_) / sigma_) / (sigma_ * z_);
}

double TruncNormModel::cdf(double x) const {
    if (x <= bounds_.lo) return 0.0;
    if (x >= bounds_.hi) return 1.0;
    return (std_normal_cdf((x - mu_) / sigma_) - cdf_lo_) / z_;
}

double TruncNormModel::sample(Rng& rng) const {
    const double u = rng.next_double();
    const double x = mu_ + sigma_ * std_normal_quantile(cdf_lo_ + u * z_);
    // Quantile saturation at the extreme tails can step just outside.
    return std::clamp(x, bounds_.lo, bounds_.hi);
}

double model_pdf(const ScalarModel& m, double x) {
    return std::visit([x](const auto& d) { return d.pdf(x); }, m);
}

double model_cdf(const ScalarModel& m, double x) {
    return std::visit([x](const auto& d) { return d.cdf(x); }, m);
}

double model_survival(const ScalarModel& m, double x) {
    return std::visit([x](const auto& d) { return d.survival(x); }, m);
}

double model_sample(const ScalarModel& m, Rng& rng) {
    return std::visit([&rng](const auto& d) { return d.sample(rng); }, m);
}

const Bounds& model_bounds(const ScalarModel& m) {
    return std::visit([](const auto& d) -> const Bounds& { return d.bounds(); }, m);
}

bool is_uniform(const ScalarModel& m) {
    return std::holds_alternative<UniformModel>(m);
}

std::vector<double> sample_n(const ScalarModel& m, Rng& rng, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("sample_n: n must be >= 1");
    }
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(model_sample(m, rng));
    }
    return out;
}

}  // namespace xedrel

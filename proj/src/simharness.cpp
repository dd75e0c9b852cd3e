#include "xedrel/simharness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "xedrel/rng.hpp"

namespace xedrel {

namespace {

// Stream keys for deriving independent generators from one run seed.
constexpr std::uint64_t kStreamKeyTrace = 0;
constexpr std::uint64_t kStreamKeyDemand = 1;
constexpr std::uint64_t kStreamKeyBaseline = 2;
constexpr std::uint64_t kStreamKeyWorkerBase = 16;

// One GFLOPS draw from a sampling law over [lo, hi]; lo == hi is a
// constant trace (zero-width knob range).
class LawSampler {
public:
    LawSampler(const SamplingLaw& law, double lo, double hi) : lo_(lo), hi_(hi) {
        if (lo_ < hi_ && law.kind == SamplingLaw::Kind::TruncNorm) {
            model_.emplace(law.mu, law.sigma, Bounds(lo_, hi_));
        }
    }

    double draw(Rng& rng) const {
        if (lo_ >= hi_) return lo_;
        if (model_) return model_->sample(rng);
        return lo_ + rng.next_double() * (hi_ - lo_);
    }

private:
    double lo_, hi_;
    std::optional<TruncNormModel> model_;
};

}  // namespace

double CostModel::demand_of_scale(double s) const {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw std::invalid_argument("CostModel: scale must be > 0, got " + std::to_string(s));
    }
    const double r = s / s_ref;
    return gamma_ref * r * r;
}

double CostModel::scale_for_demand(double gflops) const {
    if (!(gflops > 0.0)) {
        throw std::invalid_argument("CostModel: demand must be > 0");
    }
    return s_ref * std::sqrt(gflops / gamma_ref);
}

void CostModel::validate() const {
    if (!(gamma_ref > 0.0) || !std::isfinite(gamma_ref)) {
        throw std::invalid_argument("CostModel: gamma_ref must be positive");
    }
    if (!(s_ref > 0.0) || !std::isfinite(s_ref)) {
        throw std::invalid_argument("CostModel: s_ref must be positive");
    }
}

void CapacityProfile::validate() const {
    if (threads.size() < 2 || threads.size() != gflops.size()) {
        throw std::invalid_argument("CapacityProfile: need matching thread/gflops tables");
    }
    for (std::size_t i = 0; i + 1 < threads.size(); ++i) {
        if (threads[i + 1] <= threads[i]) {
            throw std::invalid_argument("CapacityProfile: thread counts must increase");
        }
        if (gflops[i + 1] < gflops[i]) {
            throw std::invalid_argument("CapacityProfile: capacity must be nondecreasing");
        }
    }
    if (!(gflops.front() > 0.0)) {
        throw std::invalid_argument("CapacityProfile: capacities must be positive");
    }
}

double CapacityProfile::capacity_at(double thread_value) const {
    if (thread_value < threads.front() || thread_value > threads.back()) {
        throw std::out_of_range("CapacityProfile: thread value " + std::to_string(thread_value) +
                                " outside table range [" + std::to_string(threads.front()) +
                                ", " + std::to_string(threads.back()) + "]");
    }
    auto it = std::upper_bound(threads.begin(), threads.end(), thread_value);
    if (it == threads.end()) return gflops.back();
    const std::size_t hi = static_cast<std::size_t>(it - threads.begin());
    if (hi == 0) return gflops.front();
    const std::size_t lo = hi - 1;
    const double t = (thread_value - threads[lo]) /
                     static_cast<double>(threads[hi] - threads[lo]);
    return gflops[lo] + t * (gflops[hi] - gflops[lo]);
}

double CapacityProfile::thread_for_capacity(double capacity) const {
    if (capacity < gflops.front() || capacity > gflops.back()) {
        throw std::out_of_range("CapacityProfile: capacity " + std::to_string(capacity) +
                                " outside table range");
    }
    auto it = std::upper_bound(gflops.begin(), gflops.end(), capacity);
    if (it == gflops.end()) return threads.back();
    const std::size_t hi = static_cast<std::size_t>(it - gflops.begin());
    if (hi == 0) return threads.front();
    const std::size_t lo = hi - 1;
    const double seg = gflops[hi] - gflops[lo];
    if (seg <= 0.0) return threads[lo];
    const double t = (capacity - gflops[lo]) / seg;
    return threads[lo] + t * static_cast<double>(threads[hi] - threads[lo]);
}

CapacityProfile CapacityProfile::synthetic_default() {
    // C(n) = c1 * n^p anchored at C(2) = 55, C(6) = 152.
    const double p = std::log(152.0 / 55.0) / std::log(3.0);
    const double c1 = 55.0 / std::pow(2.0, p);
    CapacityProfile out;
    for (int n = 2; n <= 12; ++n) {
        out.threads.push_back(n);
        out.gflops.push_back(c1 * std::pow(static_cast<double>(n), p));
    }
    return out;
}

void TraceConfig::validate(const CapacityProfile& profile, const CostModel& cost) const {
    profile.validate();
    cost.validate();
    if (thread_lo > thread_hi || thread_lo < profile.min_threads() ||
        thread_hi > profile.max_threads()) {
        throw std::invalid_argument("TraceConfig: thread range [" + std::to_string(thread_lo) +
                                    ", " + std::to_string(thread_hi) +
                                    "] outside profile domain [" +
                                    std::to_string(profile.min_threads()) + ", " +
                                    std::to_string(profile.max_threads()) + "]");
    }
    if (!(scale_lo > 0.0) || scale_lo > scale_hi) {
        throw std::invalid_argument("TraceConfig: invalid scale range");
    }
    if (change_interval < 1) {
        throw std::invalid_argument("TraceConfig: change_interval must be >= 1");
    }
    if (n_frames < 1) {
        throw std::invalid_argument("TraceConfig: n_frames must be >= 1");
    }
    for (const SamplingLaw* law : {&capacity_law, &demand_law}) {
        if (law->kind == SamplingLaw::Kind::TruncNorm && !(law->sigma > 0.0)) {
            throw std::invalid_argument("TraceConfig: truncnorm law needs sigma > 0");
        }
    }
}

SimResult run_stream_sim(const TraceConfig& cfg, const CostModel& cost,
                         const CapacityProfile& profile, QosThreshold theta) {
    cfg.validate(profile, cost);

    const double cap_lo = profile.capacity_at(cfg.thread_lo);
    const double cap_hi = profile.capacity_at(cfg.thread_hi);
    const double dem_lo = cost.demand_of_scale(cfg.scale_lo);
    const double dem_hi = cost.demand_of_scale(cfg.scale_hi);

    const LawSampler cap_sampler(cfg.capacity_law, cap_lo, cap_hi);
    const LawSampler dem_sampler(cfg.demand_law, dem_lo, dem_hi);

    Rng rng = Rng::stream(cfg.seed, kStreamKeyTrace);
    const double th = theta.value();

    SimResult out;
    out.theta = th;
    out.records.reserve(static_cast<std::size_t>(cfg.n_frames));

    double capacity = 0.0, demand = 0.0;
    long hits = 0;
    double fps_sum = 0.0;
    for (long frame = 0; frame < cfg.n_frames; ++frame) {
        if (frame % cfg.change_interval == 0) {
            capacity = cap_sampler.draw(rng);
            demand = dem_sampler.draw(rng);
        }
        FrameRecord rec;
        rec.frame = frame;
        rec.threads = profile.thread_for_capacity(capacity);
        rec.scale = cost.scale_for_demand(demand);
        rec.capacity_gflops = capacity;
        rec.demand_gflops = demand;
        rec.inference_s = demand / capacity;
        rec.met_qos = capacity >= th * demand;
        hits += rec.met_qos ? 1 : 0;
        fps_sum += capacity / demand;
        out.records.push_back(rec);
    }
    out.empirical_reliability = static_cast<double>(hits) / static_cast<double>(cfg.n_frames);
    out.mean_fps = fps_sum / static_cast<double>(cfg.n_frames);
    return out;
}

std::vector<std::pair<double, double>> empirical_reliability_curve(
    const SimResult& result, std::span<const double> thetas) {
    if (result.records.empty()) {
        throw std::invalid_argument("empirical_reliability_curve: no frame records");
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(thetas.size());
    for (double th : thetas) {
        long hits = 0;
        for (const FrameRecord& r : result.records) {
            if (r.capacity_gflops >= th * r.demand_gflops) ++hits;
        }
        out.emplace_back(th, static_cast<double>(hits) /
                                 static_cast<double>(result.records.size()));
    }
    return out;
}

IndependentSamples independent_samples(const SimResult& result, int change_interval) {
    if (change_interval < 1) {
        throw std::invalid_argument("independent_samples: change_interval must be >= 1");
    }
    IndependentSamples out;
    for (std::size_t i = 0; i < result.records.size();
         i += static_cast<std::size_t>(change_interval)) {
        out.capacity.push_back(result.records[i].capacity_gflops);
        out.demand.push_back(result.records[i].demand_gflops);
        out.frame.push_back(result.records[i].frame);
    }
    return out;
}

void DeploymentConfig::validate(const CapacityProfile& profile) const {
    if (n_workers < 1) {
        throw std::invalid_argument("DeploymentConfig: n_workers must be >= 1");
    }
    if (worker_thread_ranges.size() != static_cast<std::size_t>(n_workers)) {
        throw std::invalid_argument("DeploymentConfig: one thread range per worker required");
    }
    for (const auto& [lo, hi] : worker_thread_ranges) {
        if (lo > hi || lo < profile.min_threads() || hi > profile.max_threads()) {
            throw std::invalid_argument("DeploymentConfig: worker thread range [" +
                                        std::to_string(lo) + ", " + std::to_string(hi) +
                                        "] outside profile domain");
        }
    }
    if (partition) {
        if (partition->size() != static_cast<std::size_t>(n_workers)) {
            throw std::invalid_argument("DeploymentConfig: partition size mismatch");
        }
        Allocation check(*partition);  // validates positivity and unit sum
    }
    if (!(tau_comm_s >= 0.0)) {
        throw std::invalid_argument("DeploymentConfig: tau_comm_s must be >= 0");
    }
    if (baseline_thread_range) {
        const auto& [lo, hi] = *baseline_thread_range;
        if (lo > hi || lo < profile.min_threads() || hi > profile.max_threads()) {
            throw std::invalid_argument("DeploymentConfig: baseline thread range invalid");
        }
    }
}

DeploymentReport run_series_deployment(const DeploymentConfig& dep, const TraceConfig& cfg,
                                       const CostModel& cost, const CapacityProfile& profile) {
    dep.validate(profile);
    cfg.validate(profile, cost);

    const int n = dep.n_workers;
    std::vector<double> shares =
        dep.partition ? *dep.partition
                      : std::vector<double>(static_cast<std::size_t>(n),
                                            1.0 / static_cast<double>(n));

    const double dem_lo = cost.demand_of_scale(cfg.scale_lo);
    const double dem_hi = cost.demand_of_scale(cfg.scale_hi);
    const LawSampler dem_sampler(cfg.demand_law, dem_lo, dem_hi);
    Rng dem_rng = Rng::stream(cfg.seed, kStreamKeyDemand);

    std::vector<LawSampler> cap_samplers;
    std::vector<Rng> cap_rngs;
    for (int w = 0; w < n; ++w) {
        const auto& [lo, hi] = dep.worker_thread_ranges[static_cast<std::size_t>(w)];
        cap_samplers.emplace_back(cfg.capacity_law, profile.capacity_at(lo),
                                  profile.capacity_at(hi));
        cap_rngs.push_back(Rng::stream(cfg.seed, kStreamKeyWorkerBase +
                                                     static_cast<std::uint64_t>(w)));
    }
    const auto [base_lo, base_hi] =
        dep.baseline_thread_range.value_or(dep.worker_thread_ranges.front());
    const LawSampler base_sampler(cfg.capacity_law, profile.capacity_at(base_lo),
                                  profile.capacity_at(base_hi));
    Rng base_rng = Rng::stream(cfg.seed, kStreamKeyBaseline);

    DeploymentReport rep;
    rep.frames.reserve(static_cast<std::size_t>(cfg.n_frames));
    std::vector<double> worker_fps_sum(static_cast<std::size_t>(n), 0.0);
    std::vector<double> worker_lat_sum(static_cast<std::size_t>(n), 0.0);
    double sys_fps_sum = 0.0, sys_lat_sum = 0.0;
    double base_fps_sum = 0.0, base_lat_sum = 0.0;

    double demand = 0.0, base_cap = 0.0;
    std::vector<double> caps(static_cast<std::size_t>(n), 0.0);
    for (long frame = 0; frame < cfg.n_frames; ++frame) {
        if (frame % cfg.change_interval == 0) {
            demand = dem_sampler.draw(dem_rng);
            for (int w = 0; w < n; ++w) {
                caps[static_cast<std::size_t>(w)] =
                    cap_samplers[static_cast<std::size_t>(w)].draw(
                        cap_rngs[static_cast<std::size_t>(w)]);
            }
            base_cap = base_sampler.draw(base_rng);
        }

        WorkerFrame wf;
        wf.demand_gflops = demand;
        wf.worker_latency_s.resize(static_cast<std::size_t>(n));
        double worst = 0.0;
        for (int w = 0; w < n; ++w) {
            const std::size_t wi = static_cast<std::size_t>(w);
            const double lat = dep.tau_comm_s + shares[wi] * demand / caps[wi];
            wf.worker_latency_s[wi] = lat;
            worst = std::max(worst, lat);
            worker_fps_sum[wi] += 1.0 / lat;
            worker_lat_sum[wi] += lat;
        }
        wf.system_latency_s = worst;
        sys_fps_sum += 1.0 / worst;
        sys_lat_sum += worst;

        const double base_lat = demand / base_cap;  // local frame, no comm leg
        base_fps_sum += 1.0 / base_lat;
        base_lat_sum += base_lat;

        rep.frames.push_back(std::move(wf));
    }

    const double nf = static_cast<double>(cfg.n_frames);
    rep.workers.resize(static_cast<std::size_t>(n));
    for (int w = 0; w < n; ++w) {
        const std::size_t wi = static_cast<std::size_t>(w);
        rep.workers[wi] = {worker_fps_sum[wi] / nf, worker_lat_sum[wi] / nf};
    }
    rep.system = {sys_fps_sum / nf, sys_lat_sum / nf};
    rep.baseline = {base_fps_sum / nf, base_lat_sum / nf};
    rep.speedup_vs_baseline = rep.system.mean_fps / rep.baseline.mean_fps;
    return rep;
}

}  // namespace xedrel

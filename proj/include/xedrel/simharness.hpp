#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xedrel/bounds.hpp"
#include "xedrel/device.hpp"

namespace xedrel {

// Per-frame computational demand, quadratic in the spatial scale factor:
// halving each frame dimension quarters the pixels and the cost.
struct CostModel {
    double gamma_ref;     // GFLOPs per frame at the reference scale
    double s_ref = 1.0;   // reference scale factor

    double demand_of_scale(double s) const;
    double scale_for_demand(double gflops) const;
    void validate() const;
};

// Monotone mapping from allocated CPU threads to achieved GFLOPS.
// Fractional thread values (CPU quota style) interpolate linearly between
// table entries; lookups never extrapolate past the table.
struct CapacityProfile {
    std::vector<int> threads;
    std::vector<double> gflops;

    double capacity_at(double thread_value) const;
    double thread_for_capacity(double capacity) const;
    int min_threads() const { return threads.front(); }
    int max_threads() const { return threads.back(); }
    void validate() const;

    // Bundled default: power law through 55 GFLOPS at 2 threads and
    // 152 GFLOPS at 6 threads, tabulated for 2..12 threads. Near-linear
    // growth with diminishing returns.
    static CapacityProfile synthetic_default();
};

// How one trace variable (capacity or demand, in GFLOPS) is resampled:
// uniform over its derived bounds, or a truncated normal inside them.
struct SamplingLaw {
    enum class Kind { Uniform, TruncNorm };
    Kind kind = Kind::Uniform;
    double mu = 0.0;     // truncnorm only
    double sigma = 0.0;  // truncnorm only
};

struct TraceConfig {
    int thread_lo = 0;
    int thread_hi = 0;
    double scale_lo = 0.0;
    double scale_hi = 0.0;
    int change_interval = 1;  // frames between resamples
    long n_frames = 0;
    std::uint64_t seed = 0;
    SamplingLaw capacity_law;
    SamplingLaw demand_law;

    void validate(const CapacityProfile& profile, const CostModel& cost) const;
};

struct FrameRecord {
    long frame;
    double threads;  // fractional CPU allocation behind the capacity draw
    double scale;
    double capacity_gflops;
    double demand_gflops;
    double inference_s;
    bool met_qos;
};

struct SimResult {
    std::vector<FrameRecord> records;
    double theta;
    double empirical_reliability;  // met_qos count / n_frames
    double mean_fps;               // mean over frames of capacity/demand
};

/// Frame loop over a capacity/demand trace: both variables resample at
/// every change-interval boundary (capacity draw first), frames in
/// between repeat the pair. Deterministic for a fixed seed.
SimResult run_stream_sim(const TraceConfig& cfg, const CostModel& cost,
                         const CapacityProfile& profile, QosThreshold theta);

/// Empirical fraction of recorded frames with capacity/demand >= theta,
/// per grid point.
std::vector<std::pair<double, double>> empirical_reliability_curve(
    const SimResult& result, std::span<const double> thetas);

// First frame of each change interval: one statistically independent
// (capacity, demand) observation per resample. (Averaging each interval
// would be the alternative decimation; the first-frame rule is used
// throughout.)
struct IndependentSamples {
    std::vector<double> capacity;
    std::vector<double> demand;
    std::vector<long> frame;
};
IndependentSamples independent_samples(const SimResult& result, int change_interval);

// A series spatial-partitioning deployment: each worker owns a frame
// region, the frame completes when the slowest worker finishes.
struct DeploymentConfig {
    int n_workers = 0;
    std::vector<std::pair<int, int>> worker_thread_ranges;
    double tau_comm_s = 0.0;  // one-way region transmission latency;
                              // local-wireless presets run 0.005-0.020 s
    std::optional<std::vector<double>> partition;  // default: equal split
    std::optional<std::pair<int, int>> baseline_thread_range;  // default: worker 0's

    void validate(const CapacityProfile& profile) const;
};

struct WorkerFrame {
    std::vector<double> worker_latency_s;  // tau_comm + share*demand/capacity
    double system_latency_s;               // max over workers
    double demand_gflops;                   // full-frame demand this frame
};

struct WorkerSummary {
    double mean_fps;
    double mean_latency_s;
};

struct DeploymentReport {
    std::vector<WorkerFrame> frames;
    std::vector<WorkerSummary> workers;
    WorkerSummary system;    // fps averaged as mean of per-frame 1/latency
    WorkerSummary baseline;  // single worker, full frames, no comm leg
    double speedup_vs_baseline;
};

/// Runs the deployment and its single-worker baseline over the same
/// demand trace (shared stream), with independent per-worker capacity
/// streams. Deterministic for a fixed seed.
DeploymentReport run_series_deployment(const DeploymentConfig& dep, const TraceConfig& cfg,
                                       const CostModel& cost, const CapacityProfile& profile);

}  // namespace xedrel

#include "xedrel/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace xedrel {

namespace {

void require_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("epsilon must lie in (0, 1), got " +
                                    std::to_string(epsilon));
    }
}

// Descending reliability, ties by label for deterministic output.
void sort_candidates(std::vector<LabeledReliability>& cs) {
    std::sort(cs.begin(), cs.end(), [](const LabeledReliability& a, const LabeledReliability& b) {
        if (a.reliability != b.reliability) return a.reliability > b.reliability;
        return a.label < b.label;
    });
}

// ---- partition solver ----------------------------------------------------

struct DeviceCurve {
    const DeviceModel* device;
    double alpha_sat;   // share up to which reliability is exactly 1
    double alpha_zero;  // share at and beyond which reliability is 0
    double alpha_cap;   // usable upper share: min(1, just under alpha_zero)

    double rel(double alpha, double theta) const {
        return device_reliability(*device, QosThreshold(alpha * theta));
    }
    // Marginal log-reliability R'/R at alpha*theta; <= 0, 0 while
    // saturated, -inf at the zero boundary. Decreasing in alpha near any
    // interior optimum, but not globally monotone: the piecewise closed
    // form changes curvature across its breakpoints.
    double marginal(double alpha, double theta) const {
        const double r = rel(alpha, theta);
        if (r <= 0.0) return -std::numeric_limits<double>::infinity();
        if (r >= 1.0) return 0.0;
        return device_reliability_dtheta(*device, alpha * theta) / r;
    }
};

// Share at which this device's marginal equals lambda (< 0): bisection on
// [alpha_sat, alpha_cap]. The marginal is 0 at saturation and diverges to
// -inf approaching alpha_zero, so a crossing exists whenever the cap's
// marginal is below lambda; otherwise the device can absorb its cap.
double share_for_marginal(const DeviceCurve& dc, double lambda, double theta) {
    double lo = dc.alpha_sat;
    double hi = dc.alpha_cap;
    if (dc.marginal(hi, theta) >= lambda) return hi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;  // adjacent doubles
        if (dc.marginal(mid, theta) >= lambda) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

double log_objective(const std::vector<DeviceCurve>& curves, std::span<const double> alphas,
                     double theta) {
    double sum = 0.0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const double r = curves[i].rel(alphas[i], theta);
        if (r <= 0.0) return -std::numeric_limits<double>::infinity();
        sum += std::log(r);
    }
    return sum;
}

std::vector<double> normalized(std::vector<double> v) {
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    for (double& x : v) x /= s;
    return v;
}

double max_marginal_spread(const std::vector<DeviceCurve>& curves,
                           std::span<const double> alphas, double theta) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    int interior = 0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const double r = curves[i].rel(alphas[i], theta);
        if (r >= 1.0 || r <= 0.0) continue;
        const double m = curves[i].marginal(alphas[i], theta);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
        ++interior;
    }
    return interior >= 2 ? hi - lo : 0.0;
}

// Gauss-Seidel equalization: move load between pairs until their
// marginals match. Around an interior optimum the transfer direction is
// well posed (the difference of marginals decreases through zero), which
// sidesteps the global non-monotonicity that breaks the multiplier map.
void polish_pairwise(const std::vector<DeviceCurve>& curves, std::vector<double>& alphas,
                     double theta) {
    const std::size_t n = curves.size();
    for (int pass = 0; pass < 60; ++pass) {
        if (max_marginal_spread(curves, alphas, theta) <= 1e-9) break;
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double mi = curves[i].marginal(alphas[i], theta);
                double mj = curves[j].marginal(alphas[j], theta);
                if (mi == mj) continue;
                // Receiver has the gentler (larger, closer to 0) marginal.
                std::size_t from = mi > mj ? j : i;
                std::size_t to = mi > mj ? i : j;
                auto diff = [&](double t) {
                    return curves[to].marginal(alphas[to] + t, theta) -
                           curves[from].marginal(alphas[from] - t, theta);
                };
                if (diff(0.0) <= 0.0) continue;
                double t_max = std::min(curves[to].alpha_cap - alphas[to],
                                        alphas[from] - curves[from].alpha_sat);
                if (t_max <= 0.0) continue;
                // Expand to a sign change, then bisect to adjacent doubles.
                double t_hi = std::min(t_max, 1e-6);
                while (t_hi < t_max && diff(t_hi) > 0.0) {
                    t_hi = std::min(t_max, t_hi * 4.0);
                }
                if (diff(t_hi) > 0.0) t_hi = t_max;
                double lo = 0.0, hi = t_hi;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (!(mid > lo && mid < hi)) break;
                    if (diff(mid) > 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                if (lo <= 0.0) continue;
                const double obj_before =
                    std::log(curves[to].rel(alphas[to], theta)) +
                    std::log(curves[from].rel(alphas[from], theta));
                const double obj_after =
                    std::log(curves[to].rel(alphas[to] + lo, theta)) +
                    std::log(curves[from].rel(alphas[from] - lo, theta));
                if (obj_after + 1e-14 < obj_before) continue;
                alphas[to] += lo;
                alphas[from] -= lo;
                moved = true;
            }
        }
        if (!moved) break;
    }
}

// Nelder-Mead on y in R^N with alpha = softmax(y); interior stationary
// points coincide with the simplex-constrained ones.
std::vector<double> nelder_mead_softmax(const std::vector<DeviceCurve>& curves, double theta,
                                        std::span<const double> start) {
    const std::size_t n = curves.size();
    auto to_alpha = [&](const std::vector<double>& y) {
        std::vector<double> a(n);
        double mx = *std::max_element(y.begin(), y.end());
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = std::exp(y[i] - mx);
            s += a[i];
        }
        for (double& x : a) x /= s;
        return a;
    };
    auto f = [&](const std::vector<double>& y) {
        return -log_objective(curves, to_alpha(y), theta);
    };

    std::vector<std::vector<double>> simplex;
    std::vector<double> y0(n);
    for (std::size_t i = 0; i < n; ++i) y0[i] = std::log(std::max(start[i], 1e-12));
    simplex.push_back(y0);
    for (std::size_t i = 0; i < n; ++i) {
        auto y = y0;
        y[i] += 0.05;
        simplex.push_back(y);
    }
    std::vector<double> fv(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i) fv[i] = f(simplex[i]);

    for (int iter = 0; iter < 4000; ++iter) {
        std::vector<std::size_t> order(simplex.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return fv[a] < fv[b];
        });
        if (fv[order.back()] - fv[order.front()] < 1e-13) break;

        const std::size_t worst = order.back();
        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[order[k]][i];
        }
        for (double& c : centroid) c /= static_cast<double>(simplex.size() - 1);

        auto blend = [&](double t) {
            std::vector<double> y(n);
            for (std::size_t i = 0; i < n; ++i) {
                y[i] = centroid[i] + t * (centroid[i] - simplex[worst][i]);
            }
            return y;
        };
        auto reflected = blend(1.0);
        double fr = f(reflected);
        if (fr < fv[order.front()]) {
            auto expanded = blend(2.0);
            double fe = f(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                fv[worst] = fe;
            } else {
                simplex[worst] = reflected;
                fv[worst] = fr;
            }
        } else if (fr < fv[order[order.size() - 2]]) {
            simplex[worst] = reflected;
            fv[worst] = fr;
        } else {
            auto contracted = blend(-0.5);
            double fc = f(contracted);
            if (fc < fv[worst]) {
                simplex[worst] = contracted;
                fv[worst] = fc;
            } else {
                for (std::size_t k = 1; k < order.size(); ++k) {
                    for (std::size_t i = 0; i < n; ++i) {
                        simplex[order[k]][i] =
                            0.5 * (simplex[order[k]][i] + simplex[order[0]][i]);
                    }
                    fv[order[k]] = f(simplex[order[k]]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
        if (fv[i] < fv[best]) best = i;
    }
    return to_alpha(simplex[best]);
}

}  // namespace

double series_reliability(const DevicePool& pool, std::span<const QosThreshold> thetas) {
    if (thetas.size() != pool.size()) {
        throw std::invalid_argument("series_reliability: need one theta per device");
    }
    double product = 1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        product *= device_reliability(pool.devices[i], thetas[i]);
    }
    return product;
}

double parallel_reliability(const DevicePool& pool, QosThreshold theta) {
    double fail = 1.0;
    for (const DeviceModel& d : pool.devices) {
        fail *= 1.0 - device_reliability(d, theta);
    }
    return 1.0 - fail;
}

double partitioned_reliability(const DevicePool& pool, const Allocation& alloc,
                               QosThreshold theta) {
    if (alloc.fractions.size() != pool.size()) {
        throw std::invalid_argument("partitioned_reliability: allocation/pool size mismatch");
    }
    double product = 1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        product *= device_reliability(pool.devices[i],
                                      QosThreshold(alloc.fractions[i] * theta.value()));
    }
    return product;
}

PartitionResult optimize_partition(const DevicePool& pool, QosThreshold theta) {
    const double th = theta.value();
    const std::size_t n = pool.size();

    std::vector<DeviceCurve> curves(n);
    double sat_total = 0.0;
    double cap_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Bounds& cb = model_bounds(pool.devices[i].capacity);
        const Bounds& db = model_bounds(pool.devices[i].demand);
        DeviceCurve dc;
        dc.device = &pool.devices[i];
        dc.alpha_sat = std::clamp(cb.lo / db.hi / th, 0.0, 1.0);
        dc.alpha_zero = cb.hi / db.lo / th;
        dc.alpha_cap = std::min(1.0, dc.alpha_zero * (1.0 - 1e-12));
        curves[i] = dc;
        sat_total += dc.alpha_sat;
        cap_total += dc.alpha_cap;
    }

    const std::vector<double> equal(n, 1.0 / static_cast<double>(n));

    // Everything saturated at equal split: flat objective, equal split by
    // the tie-breaking rule.
    if (log_objective(curves, equal, th) == 0.0) {
        return {Allocation(equal), 1.0};
    }
    // Reliability 1 reachable by scaling saturation shares.
    if (sat_total >= 1.0) {
        std::vector<double> a(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = curves[i].alpha_sat / sat_total;
        return {Allocation(a), partitioned_reliability(pool, Allocation(a), theta)};
    }
    // No allocation keeps every device above zero reliability.
    if (cap_total <= 1.0) {
        std::ostringstream os;
        os << "optimize_partition: infeasible at theta=" << th
           << "; the pool's combined positive-reliability shares cover only " << cap_total
           << " of the workload";
        throw PartitionInfeasible(os.str());
    }

    // Outer bisection on the shared multiplier lambda < 0. Total share
    // grows as lambda falls; bracket then bisect to total 1.
    auto total_share = [&](double lambda) {
        double s = 0.0;
        for (const DeviceCurve& dc : curves) s += share_for_marginal(dc, lambda, th);
        return s;
    };
    double lam_hi = -1e-9;
    for (int i = 0; i < 120 && total_share(lam_hi) >= 1.0; ++i) lam_hi *= 0.5;
    double lam_lo = std::min(-1.0, 2.0 * lam_hi);
    for (int i = 0; i < 200 && total_share(lam_lo) < 1.0; ++i) lam_lo *= 2.0;

    std::vector<double> lambda_alphas(n);
    for (int i = 0; i < 400; ++i) {
        const double lam = 0.5 * (lam_lo + lam_hi);
        if (!(lam < lam_hi && lam > lam_lo)) break;
        if (total_share(lam) >= 1.0) {
            lam_lo = lam;
        } else {
            lam_hi = lam;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        lambda_alphas[i] = share_for_marginal(curves[i], lam_lo, th);
    }
    lambda_alphas = normalized(lambda_alphas);

    // The objective is only piecewise log-concave, so a single stationary
    // point can be a local optimum. Polish several starts and keep the
    // best: the multiplier solution, the equal split, and either a coarse
    // share scan (two devices) or device-heavy corners (more).
    std::vector<std::vector<double>> starts{lambda_alphas, equal};
    if (n == 2) {
        double best_a = 0.5;
        double best_v = -std::numeric_limits<double>::infinity();
        for (int i = 1; i < 512; ++i) {
            const double a = i / 512.0;
            const double v = log_objective(curves, std::vector<double>{a, 1.0 - a}, th);
            if (v > best_v) {
                best_v = v;
                best_a = a;
            }
        }
        starts.push_back({best_a, 1.0 - best_a});
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> heavy(n, 0.2 / static_cast<double>(n - 1));
            heavy[i] = 0.8;
            starts.push_back(normalized(std::move(heavy)));
        }
    }

    std::vector<double> alphas = equal;
    double best_obj = -std::numeric_limits<double>::infinity();
    for (std::vector<double>& start : starts) {
        polish_pairwise(curves, start, th);
        const double obj = log_objective(curves, start, th);
        if (obj > best_obj) {
            best_obj = obj;
            alphas = start;
        }
    }

    // Last resort for a start set that straddled a marginal discontinuity.
    if (max_marginal_spread(curves, alphas, th) > 1e-7) {
        std::vector<double> nm = nelder_mead_softmax(curves, th, alphas);
        polish_pairwise(curves, nm, th);
        if (log_objective(curves, nm, th) > best_obj) {
            alphas = nm;
        }
    }

    alphas = normalized(alphas);
    Allocation alloc(alphas);
    return {alloc, partitioned_reliability(pool, alloc, theta)};
}

double partition_stationarity_residual(const DevicePool& pool, QosThreshold theta,
                                       const Allocation& alloc) {
    if (alloc.fractions.size() != pool.size()) {
        throw std::invalid_argument("partition_stationarity_residual: size mismatch");
    }
    const double th = theta.value();
    std::vector<double> marginals;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const double t_eff = alloc.fractions[i] * th;
        const double r = device_reliability(pool.devices[i], QosThreshold(t_eff));
        if (r >= 1.0 || r <= 0.0) continue;  // saturated/zero: not interior
        marginals.push_back(device_reliability_dtheta(pool.devices[i], t_eff) / r);
    }
    if (marginals.size() < 2) return 0.0;
    const auto [mn, mx] = std::minmax_element(marginals.begin(), marginals.end());
    return *mx - *mn;
}

SelectionResult select_series(std::vector<LabeledReliability> candidates, double epsilon) {
    require_epsilon(epsilon);
    if (candidates.empty()) {
        throw std::invalid_argument("select_series: empty candidate set");
    }
    sort_candidates(candidates);

    SelectionResult out{0, {}, 0.0, false};
    double product = 1.0;
    for (const LabeledReliability& c : candidates) {
        const double next = product * c.reliability;
        if (next < epsilon) break;
        product = next;
        out.chosen_labels.push_back(c.label);
    }
    out.n_star = out.chosen_labels.size();
    out.feasible = out.n_star > 0;
    out.achieved_reliability = out.feasible ? product : candidates.front().reliability;
    if (!out.feasible) out.chosen_labels.clear();
    return out;
}

SelectionResult select_parallel(std::vector<LabeledReliability> candidates, double epsilon) {
    require_epsilon(epsilon);
    if (candidates.empty()) {
        throw std::invalid_argument("select_parallel: empty candidate set");
    }
    sort_candidates(candidates);

    double fail = 1.0;
    std::vector<std::string> chosen;
    for (const LabeledReliability& c : candidates) {
        fail *= 1.0 - c.reliability;
        chosen.push_back(c.label);
        if (fail <= 1.0 - epsilon) {
            return {chosen.size(), std::move(chosen), 1.0 - fail, true};
        }
    }
    return {0, std::move(chosen), 1.0 - fail, false};
}

namespace {
std::vector<LabeledReliability> pool_reliabilities(const DevicePool& pool, QosThreshold theta) {
    std::vector<LabeledReliability> out;
    out.reserve(pool.size());
    for (const DeviceModel& d : pool.devices) {
        out.push_back({d.label, device_reliability(d, theta)});
    }
    return out;
}
}  // namespace

SelectionResult max_series_devices(const DevicePool& pool, QosThreshold theta, double epsilon) {
    return select_series(pool_reliabilities(pool, theta), epsilon);
}

SelectionResult min_parallel_devices(const DevicePool& pool, QosThreshold theta, double epsilon) {
    return select_parallel(pool_reliabilities(pool, theta), epsilon);
}

int parallel_worst_case_bound(double r_min, double epsilon) {
    if (!(r_min > 0.0 && r_min < 1.0)) {
        throw std::invalid_argument("parallel_worst_case_bound: r_min must lie in (0, 1)");
    }
    require_epsilon(epsilon);
    const double ratio = std::log(1.0 - epsilon) / std::log(1.0 - r_min);
    // Absorb float rounding when the ratio lands on an integer.
    return static_cast<int>(std::ceil(ratio - 1e-9));
}

}  // namespace xedrel

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace xedrel {

// Closed interval [lo, hi], the unit of declared operating ranges (GFLOPS).
struct Bounds {
    double lo;
    double hi;

    Bounds(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            throw std::invalid_argument("Bounds: endpoints must be finite");
        }
        if (!(lo < hi)) {
            throw std::invalid_argument("Bounds: require lo < hi, got [" +
                                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
    }

    double range() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

// Capacity and demand are physical rates; contexts that declare them
// (device models, observation traces, profiles) reject nonpositive bounds.
// The distribution math itself does not need positivity.
inline void validate_rate_bounds(const Bounds& b, const std::string& what) {
    if (!(b.lo > 0.0)) {
        throw std::invalid_argument(what + ": rate bounds must be positive, got lo=" +
                                    std::to_string(b.lo));
    }
}

}  // namespace xedrel

#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace xedrel {

// Thrown when the subdivision budget is exhausted before the requested
// tolerance; the message names the integration setup.
class QuadratureError : public std::runtime_error {
public:
    explicit QuadratureError(const std::string& msg) : std::runtime_error(msg) {}
};

struct QuadratureResult {
    double value;
    double error_estimate;
    int subdivisions;
};

// Adaptive Gauss-Kronrod (G7, K15) over [a, b] to absolute tolerance
// abs_tol. Splits the interval with the worst local error estimate until
// the summed estimate clears the tolerance or max_subdivisions is hit.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_subdivisions = 2000,
                                    const std::string& context = {});

}  // namespace xedrel

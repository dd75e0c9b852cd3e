#include "xedrel/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace xedrel {

namespace {

// 15-point Kronrod extension of 7-point Gauss-Legendre (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double result_gauss = kWg[3] * fc;
    double result_kronrod = kWgk[7] * fc;

    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        result_kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) {  // indices 1,3,5 are the Gauss nodes
            result_gauss += kWg[j / 2] * (f1 + f2);
        }
    }
    const double value = result_kronrod * half;
    const double error = std::fabs((result_kronrod - result_gauss) * half);
    return Segment{a, b, value, error};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_subdivisions,
                                    const std::string& context) {
    if (a == b) return {0.0, 0.0, 0};
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::priority_queue<Segment> heap;
    heap.push(gk15(f, a, b));
    double total_value = heap.top().value;
    double total_error = heap.top().error;
    int splits = 0;

    while (total_error > abs_tol) {
        if (splits >= max_subdivisions) {
            throw QuadratureError(
                "quadrature did not reach abs_tol=" + std::to_string(abs_tol) +
                " within " + std::to_string(max_subdivisions) +
                " subdivisions (error estimate " + std::to_string(total_error) +
                ") over [" + std::to_string(a) + ", " + std::to_string(b) + "]" +
                (context.empty() ? "" : " for " + context));
        }
        Segment worst = heap.top();
        heap.pop();
        total_value -= worst.value;
        total_error -= worst.error;

        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        total_value += left.value + right.value;
        total_error += left.error + right.error;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    return {sign * total_value, total_error, splits};
}

}  // namespace xedrel

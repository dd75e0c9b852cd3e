#include "xedrel/normal.hpp"

#include <cmath>
#include <limits>

namespace xedrel {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;

// Coefficients from Cody's CALERF (netlib specfun), double precision set.
constexpr double A[5] = {3.16112374387056560e00, 1.13864154151050156e02,
                         3.77485237685302021e02, 3.20937758913846947e03,
                         1.85777706184603153e-1};
constexpr double B[4] = {2.36012909523441209e01, 2.44024637934444173e02,
                         1.28261652607737228e03, 2.84423683343917062e03};
constexpr double C[9] = {5.64188496988670089e-1, 8.88314979438837594e00,
                         6.61191906371416295e01, 2.98635138197400131e02,
                         8.81952221241769090e02, 1.71204761263407058e03,
                         2.05107837782607147e03, 1.23033935479799725e03,
                         2.15311535474403846e-8};
constexpr double D[8] = {1.57449261107098347e01, 1.17693950891312499e02,
                         5.37181101862009858e02, 1.62138957456669019e03,
                         3.29079923573345963e03, 4.36261909014324716e03,
                         3.43936767414372164e03, 1.23033935480374942e03};
constexpr double P[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                         1.25781726111229246e-1, 1.60837851487422766e-2,
                         6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr double Q[5] = {2.56852019228982242e00, 1.87295284992346047e00,
                         5.27905102951428412e-1, 6.05183413124413191e-2,
                         2.33520497626869185e-3};

constexpr double kSqrPi = 5.6418958354775628695e-1;  // 1/sqrt(pi)
constexpr double kThresh = 0.46875;
constexpr double kXBig = 26.543;  // erfc underflows to 0 beyond this

// exp(-y^2) split as exp(-ysq^2)*exp(-del) with ysq a 1/16 grid point,
// preserving accuracy of the product for moderate y (Cody's trick).
double exp_neg_y2(double y) {
    double ysq = std::trunc(y * 16.0) / 16.0;
    double del = (y - ysq) * (y + ysq);
    return std::exp(-ysq * ysq) * std::exp(-del);
}

// erfc(x) for any finite x.
double cody_erfc(double x) {
    const double y = std::fabs(x);
    double result;
    if (y <= kThresh) {
        const double ysq = y > 1.11e-16 ? y * y : 0.0;
        double xnum = A[4] * ysq;
        double xden = ysq;
        for (int i = 0; i < 3; ++i) {
            xnum = (xnum + A[i]) * ysq;
            xden = (xden + B[i]) * ysq;
        }
        const double erf_x = x * (xnum + A[3]) / (xden + B[3]);
        return 1.0 - erf_x;
    }
    if (y <= 4.0) {
        double xnum = C[8] * y;
        double xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + C[i]) * y;
            xden = (xden + D[i]) * y;
        }
        result = (xnum + C[7]) / (xden + D[7]);
        result *= exp_neg_y2(y);
    } else if (y < kXBig) {
        const double ysq = 1.0 / (y * y);
        double xnum = P[5] * ysq;
        double xden = ysq;
        for (int i = 0; i < 4; ++i) {
            xnum = (xnum + P[i]) * ysq;
            xden = (xden + Q[i]) * ysq;
        }
        result = ysq * (xnum + P[4]) / (xden + Q[4]);
        result = (kSqrPi - result) / y;
        result *= exp_neg_y2(y);
    } else {
        result = 0.0;
    }
    if (x < 0.0) {
        result = 2.0 - result;
    }
    return result;
}

}  // namespace

double std_normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
    double p = 0.5 * cody_erfc(-x / kSqrt2);
    // Saturate into the open interval so downstream ratios stay finite.
    if (p <= 0.0) p = std::numeric_limits<double>::min();
    if (p >= 1.0) p = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    return p;
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }

    // Acklam's rational approximation, three regimes.
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;

    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley step against the forward CDF.
    const double e = std_normal_cdf(x) - p;
    const double u = e / std_normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

}  // namespace xedrel

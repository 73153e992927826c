#include "dqlab/special_functions.hpp"

#include "dqlab/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dqlab {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3.0e-16;
    constexpr double fpmin = 1.0e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw numerical_error("incomplete beta continued fraction did not converge");
}

} // namespace

double normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / kSqrt2);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p must lie in (0,1)");

    // Acklam's rational approximation, |error| < 1.15e-9 before refinement.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley step against the erfc-based cdf.
    const double e = normal_cdf(x) - p;
    const double u = e / kInvSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("regularized_incomplete_beta: a, b must be positive");
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("regularized_incomplete_beta: x must lie in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(log_bt);
    if (x < (a + 1.0) / (a + b + 2.0))
        return bt * beta_continued_fraction(a, b, x) / a;
    return 1.0 - bt * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_pdf(double dof, double x) {
    if (!(dof > 0.0))
        throw std::invalid_argument("student_t_pdf: dof must be positive");
    const double log_norm = std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                            0.5 * std::log(dof * 3.141592653589793238462643383279503);
    return std::exp(log_norm - 0.5 * (dof + 1.0) * std::log1p(x * x / dof));
}

double student_t_survival(double dof, double x) {
    if (!(dof > 0.0))
        throw std::invalid_argument("student_t_survival: dof must be positive");
    if (x == 0.0) return 0.5;
    const double w = dof / (dof + x * x);
    const double half_tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, w);
    return x > 0.0 ? half_tail : 1.0 - half_tail;
}

double student_t_cdf(double dof, double x) {
    if (x < 0.0) return student_t_survival(dof, -x);
    return 1.0 - student_t_survival(dof, x);
}

double student_t_upper_quantile(double dof, double alpha) {
    if (!(dof > 0.0))
        throw std::invalid_argument("student_t_upper_quantile: dof must be positive");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("student_t_upper_quantile: alpha must lie in (0,1)");
    if (alpha == 0.5) return 0.0;
    if (alpha > 0.5) return -student_t_upper_quantile(dof, 1.0 - alpha);

    // Survival is strictly decreasing on x > 0; expand the bracket, then
    // bisect (in log space once both ends are positive).
    double lo = 0.0;
    double hi = 1.0;
    int guard = 0;
    while (student_t_survival(dof, hi) > alpha) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 2000)
            throw numerical_error("student_t_upper_quantile: bracketing failed");
    }
    if (lo > 0.0) {
        double lo_log = std::log(lo);
        double hi_log = std::log(hi);
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo_log + hi_log);
            if (student_t_survival(dof, std::exp(mid)) > alpha)
                lo_log = mid;
            else
                hi_log = mid;
            if (hi_log - lo_log <= 1e-13) break;
        }
        return std::exp(0.5 * (lo_log + hi_log));
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_survival(dof, mid) > alpha)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

double student_t_quantile(double dof, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("student_t_quantile: p must lie in (0,1)");
    if (p == 0.5) return 0.0;
    return p > 0.5 ? student_t_upper_quantile(dof, 1.0 - p)
                   : -student_t_upper_quantile(dof, p);
}

} // namespace dqlab

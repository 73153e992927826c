#include "dqlab/elliptical.hpp"

#include "dqlab/errors.hpp"
#include "dqlab/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace dqlab {

DispersionSummary k_sigma(const Matrix& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() == 0)
        throw std::invalid_argument("k_sigma: dispersion must be square and nonempty");
    double scale_sum = 0.0;
    double grand_sum = 0.0;
    for (std::size_t i = 0; i < sigma.rows(); ++i) {
        const double d = sigma.at(i, i);
        if (d < 0.0) throw std::invalid_argument("k_sigma: negative diagonal entry");
        scale_sum += std::sqrt(d);
        for (std::size_t j = 0; j < sigma.cols(); ++j) grand_sum += sigma.at(i, j);
    }
    if (!(grand_sum > 0.0))
        throw std::invalid_argument("k_sigma: 1' Sigma 1 must be positive");
    const double k = scale_sum / std::sqrt(grand_sum);
    return DispersionSummary{k, 1.0 / (k * k)};
}

DQResult dq_var_elliptical(const EllipticalSpec& spec, Level alpha) {
    const double a = alpha.value();
    const double k = k_sigma(spec.dispersion()).k_sigma;
    const UnivariateModel y = spec.standard_generator();
    const double star = survival(y, k * upper_quantile(y, a));
    return DQResult{star / a, a, star, DqMethod::analytic, {}};
}

DQResult dq_es_elliptical(const EllipticalSpec& spec, Level alpha) {
    const double a = alpha.value();
    const double k = k_sigma(spec.dispersion()).k_sigma;
    const UnivariateModel y = spec.standard_generator();
    const double target = k * es_analytic(y, a);

    // alpha_star solves ES_beta(Y) = k ES_alpha(Y); beta -> ES_beta is
    // continuous and strictly decreasing, so bisect in log beta. k >= 1
    // puts the root in (0, alpha].
    double lo_log = std::log(1e-300);
    double hi_log = std::log(a);
    if (es_analytic(y, a) >= target) {
        const double star = a;
        return DQResult{1.0, a, star, DqMethod::analytic, {}};
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo_log + hi_log);
        if (es_analytic(y, std::exp(mid)) >= target)
            lo_log = mid;
        else
            hi_log = mid;
        if (hi_log - lo_log <= 1e-14) break;
    }
    const double star = std::exp(0.5 * (lo_log + hi_log));
    return DQResult{star / a, a, star, DqMethod::analytic, {}};
}

double dq_var_limit(const EllipticalSpec& spec) {
    const double k = k_sigma(spec.dispersion()).k_sigma;
    // Rank-one dispersions give k = 1 up to rounding of 1'Sigma 1.
    if (spec.family() == EllipticalFamily::normal) return k <= 1.0 + 1e-12 ? 1.0 : 0.0;
    return std::pow(k, -spec.dof());
}

double dq_var_limit_density(const std::function<double(double)>& density, double k) {
    if (!(k >= 1.0)) throw std::invalid_argument("dq_var_limit_density: k must be >= 1");
    double previous = 0.0;
    bool have_previous = false;
    for (double x : {1e1, 1e2, 1e3, 1e4}) {
        const double fx = density(x);
        if (!(fx > 0.0)) {
            // Light-tailed densities underflow along the grid; if the ratio
            // had already vanished the limit is 0, otherwise nothing can be
            // concluded.
            if (have_previous && previous < 1e-3) return 0.0;
            throw numerical_error("dq_var_limit_density: density vanished before convergence");
        }
        const double value = k * density(k * x) / fx;
        if (have_previous && std::fabs(value - previous) < 1e-3) return value;
        previous = value;
        have_previous = true;
    }
    throw numerical_error("dq_var_limit_density: ratio did not settle; limit may not exist");
}

double dr_elliptical(const EllipticalSpec& spec, RiskMeasureKind measure, Level alpha) {
    const UnivariateModel y = spec.standard_generator();
    const double rho_y = measure == RiskMeasureKind::var
                             ? quantile(y, 1.0 - alpha.value())
                             : es_analytic(y, alpha.value());
    const Matrix& sigma = spec.dispersion();
    double mu_sum = 0.0;
    double scale_sum = 0.0;
    double grand_sum = 0.0;
    for (std::size_t i = 0; i < spec.dimension(); ++i) {
        mu_sum += spec.location()[i];
        scale_sum += std::sqrt(sigma.at(i, i));
        for (std::size_t j = 0; j < spec.dimension(); ++j) grand_sum += sigma.at(i, j);
    }
    const double denom = mu_sum + scale_sum * rho_y;
    if (denom == 0.0)
        throw std::domain_error("dr_elliptical: zero denominator; DR undefined");
    return (mu_sum + std::sqrt(grand_sum) * rho_y) / denom;
}

Matrix sigma_equicorrelated(std::size_t n, double r) {
    if (n < 1) throw std::invalid_argument("sigma_equicorrelated: n must be positive");
    if (n > 1 && (r < -1.0 / (static_cast<double>(n) - 1.0) || r > 1.0))
        throw std::invalid_argument("sigma_equicorrelated: r outside PSD range");
    Matrix s(n, n, r);
    for (std::size_t i = 0; i < n; ++i) s.at(i, i) = 1.0;
    return s;
}

Matrix sigma_ar1(std::size_t n, double r) {
    if (n < 1) throw std::invalid_argument("sigma_ar1: n must be positive");
    if (r < -1.0 || r > 1.0)
        throw std::invalid_argument("sigma_ar1: r outside [-1, 1]");
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s.at(i, j) = std::pow(r, std::fabs(static_cast<double>(i) - static_cast<double>(j)));
    return s;
}

} // namespace dqlab

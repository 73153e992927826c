#pragma once

#include "dqlab/dq_core.hpp"

#include <functional>

namespace dqlab {

// k_sigma = (sum of marginal scales) / sqrt(1' Sigma 1), >= 1 by
// Cauchy-Schwarz, equal to 1 only for rank-one Sigma = sigma sigma'.
// avg_correlation = 1 / k_sigma^2.
struct DispersionSummary {
    double k_sigma;
    double avg_correlation;
};

DispersionSummary k_sigma(const Matrix& sigma);

// Closed-form DQ for elliptical models: the exceedance of k_sigma times the
// marginal VaR/ES of the standardized generator Y ~ E1(0,1,tau). Independent
// of the location vector.
DQResult dq_var_elliptical(const EllipticalSpec& spec, Level alpha);
DQResult dq_es_elliptical(const EllipticalSpec& spec, Level alpha);

// Limit of DQ^VaR as alpha drops to 0: the density-ratio limit
// lim_x k f(kx)/f(x). Exact for the normal (indicator of k = 1) and
// Student-t (k^-dof) families; 0 for bounded support.
double dq_var_limit(const EllipticalSpec& spec);

// Generic form for a user-supplied standardized density; evaluates the ratio
// at x in {10, 1e2, 1e3, 1e4} and requires successive values to settle
// within 1e-3, otherwise throws numerical_error.
double dq_var_limit_density(const std::function<double(double)>& density, double k);

// DR of an elliptical model; equals 1/k_sigma when the location is zero.
double dr_elliptical(const EllipticalSpec& spec, RiskMeasureKind measure, Level alpha);

// Dispersion matrices used throughout the numerical experiments.
Matrix sigma_equicorrelated(std::size_t n, double r);
Matrix sigma_ar1(std::size_t n, double r);

} // namespace dqlab

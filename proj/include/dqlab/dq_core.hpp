#pragma once

#include "dqlab/distributions.hpp"
#include "dqlab/risk_measures.hpp"

#include <optional>

namespace dqlab {

enum class RiskMeasureKind { var, es };

enum class DqMethod { bisection, exceedance, rmin, analytic };

// DQ value together with the level it was computed at, the attained level
// alpha_star (value = alpha_star / alpha), the route used and, for Monte
// Carlo inputs, a batch-split standard error.
struct DQResult {
    double value = 0.0;
    double alpha = 0.0;
    double alpha_star = 0.0;
    DqMethod method = DqMethod::exceedance;
    std::optional<double> std_error;
};

// alpha_star = inf{beta in (0,1): rho_beta(S) <= sum_i rho_alpha(X_i)},
// with inf(empty) = 1. Bisection on the monotone inclusion predicate,
// resolved to 1e-12 in beta.
double alpha_star(const ScenarioMatrix& scenarios, RiskMeasureKind measure, Level alpha);

// DQ based on VaR: (1/alpha) P(S > sum_i VaR_alpha(X_i)), strict exceedance
// (ties at the threshold count as non-exceedance).
DQResult dq_var(const ScenarioMatrix& scenarios, Level alpha);

// DQ based on ES. rmin minimizes the piecewise-linear convex objective
// E[(r (S - t) + 1)_+] exactly over its breakpoints; bisection solves for
// alpha_star on beta -> ES_beta(S). The two agree to machine precision on
// finite scenario sets.
DQResult dq_es(const ScenarioMatrix& scenarios, Level alpha,
               DqMethod method = DqMethod::rmin);

// Deterministic k-way interleaved batch split; the reported value is the
// full-sample estimate and std_error the batch-means standard error.
DQResult dq_var_with_stderr(const ScenarioMatrix& scenarios, Level alpha, int batches = 10);
DQResult dq_es_with_stderr(const ScenarioMatrix& scenarios, Level alpha, int batches = 10);

// Diversification ratio rho_alpha(S) / sum_i rho_alpha(X_i). Throws on a
// zero denominator.
double dr(const ScenarioMatrix& scenarios, RiskMeasureKind measure, Level alpha);

} // namespace dqlab

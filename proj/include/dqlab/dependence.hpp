#pragma once

#include "dqlab/distributions.hpp"
#include "dqlab/risk_measures.hpp"

#include <vector>

namespace dqlab {

// Result of the common-tail-event check: the per-margin index sets of the
// alpha N largest scenarios, concentrated iff all sets coincide.
struct TailEventDiagnostic {
    bool is_concentrated = false;
    double alpha = 0.0;
    std::vector<std::vector<std::size_t>> per_margin_tail_sets;
};

// Stratified comonotonic grid: row j evaluates every marginal quantile at
// u_j = (j - 0.5) / N, so each pair of columns is comonotonic by
// construction.
ScenarioMatrix make_comonotonic(const std::vector<UnivariateModel>& marginals,
                                std::size_t count);

// Deterministic construction combining mutually exclusive marginal
// exceedances with an (n alpha)-concentrated common tail event. On the
// uniform grid, column i takes strictly decreasing values in (1,2) on the
// slice ((i-1) alpha, i alpha], 1 elsewhere on (0, n alpha], and 0 outside.
// Requires alpha < 1/n and integer alpha N.
ScenarioMatrix make_alpha_ce(std::size_t n, Level alpha, std::size_t count);

// One-hot rows: each column is Bernoulli(1/n) and row sums are identically
// 1. Requires count divisible by n.
ScenarioMatrix make_multinomial_onehot(std::size_t n, std::size_t count);

// Analytic DQ^ES of the pair of uniform[-1,1] margins whose sum is
// uniform[-t,t]: (1/alpha) (1 - (2 - 2 alpha)/t)_+, sweeping [0,1] as t
// sweeps (0,2].
double dq_es_uniform_pair(double t, Level alpha);

// Requires uniform scenario probabilities and integer alpha N; ties among
// equal values are broken by ascending scenario index.
TailEventDiagnostic check_alpha_concentration(const ScenarioMatrix& scenarios, Level alpha);

} // namespace dqlab

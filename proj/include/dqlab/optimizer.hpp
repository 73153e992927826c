#pragma once

#include "dqlab/dq_core.hpp"
#include "dqlab/mrv.hpp"
#include "dqlab/weights.hpp"

namespace dqlab {

enum class OptimizeMethod { closed_form, qp_fallback, simplex_search, convex_mrv };

struct OptimizationReport {
    Weights weights;
    double objective = 0.0;
    OptimizeMethod method = OptimizeMethod::closed_form;
    int iterations = 0;
    bool converged = false;
};

// DQ of an elliptical portfolio is decreasing in k of the weighted
// dispersion, so the minimizer maximizes w' sigma / sqrt(w' Sigma w) over the
// simplex. The interior solution Sigma^{-1} sigma applies when nonnegative;
// otherwise an active-set QP (min w' Sigma w s.t. w' sigma = 1, w >= 0)
// takes over. The reported objective is k at the optimum; the result does
// not depend on alpha or the location.
OptimizationReport optimize_elliptical(const EllipticalSpec& spec);

// Derivative-free pattern search over softmax-parameterized weights on one
// fixed scenario set (common random numbers), multi-start. Local search
// only: the empirical objective is piecewise constant and not convex.
// Requires alpha * N >= 20.
OptimizationReport optimize_dq_empirical(const ScenarioMatrix& scenarios,
                                         RiskMeasureKind measure, Level alpha);

// Minimizes the small-alpha limit f(w) for an MRV model with tail index
// gamma > 1 via projected gradient on the normalized constraint
// sum_i w_i eta_{e_i}^{1/gamma} = 1, then rescales onto the simplex.
OptimizationReport optimize_mrv_limit(const SpectralMeasure& psi);

} // namespace dqlab

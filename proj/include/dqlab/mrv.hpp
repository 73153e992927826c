#pragma once

#include "dqlab/distributions.hpp"
#include "dqlab/weights.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dqlab {

struct SpectralAtom {
    std::vector<double> direction;  // L1 norm 1
    double weight;                  // positive
};

// Discrete spectral measure of a multivariate regularly varying model:
// atoms on the L1 unit sphere with weights summing to 1, plus the tail
// index. Continuous measures enter as quadrature atoms.
class SpectralMeasure {
public:
    SpectralMeasure(std::vector<SpectralAtom> atoms, double tail_index);

    // Atoms e_i with weight 1/n each: the spectral measure of iid margins.
    static SpectralMeasure iid(std::size_t n, double tail_index);

    const std::vector<SpectralAtom>& atoms() const { return atoms_; }
    double tail_index() const { return gamma_; }
    std::size_t dimension() const { return atoms_.front().direction.size(); }

private:
    std::vector<SpectralAtom> atoms_;
    double gamma_;
};

// eta_x = sum_k p_k (x' s_k)^gamma; positively homogeneous of degree gamma.
// Negative x' s_k is rejected unless gamma is an integer.
double eta(std::span<const double> x, const SpectralMeasure& psi);

// Small-alpha limit of DQ^VaR of the weighted portfolio:
// f(w) = eta_w / (sum_i w_i eta_{e_i}^{1/gamma})^gamma, homogeneous of
// degree 0 in w, with f(e_i) = 1. The raw overload accepts any nonnegative,
// not-all-zero weight vector (positive rescaling leaves f unchanged).
double dq_limit_mrv(const Weights& w, const SpectralMeasure& psi);
double dq_limit_mrv(std::span<const double> w, const SpectralMeasure& psi);

// iid margins with tail index gamma: the limit is n^(1-gamma).
double dq_limit_iid(std::size_t n, double gamma);

// Two-asset factor model X = A Y with Y iid Student-t(nu) and
// A = [[1, 0], [r, sqrt(1-r^2)]]: closed-form f(w).
double example2_f(const Weights& w, double r, double nu);

// The same model as a two-atom spectral measure (directions (1,r)/(1+r) and
// (0,1)); atoms in the negative orthant drop out of every eta with w >= 0,
// so they are omitted and the weights renormalized.
SpectralMeasure example2_spectral(double r, double nu);

// Sampler for the factor model, for Monte Carlo checks of the limit.
ScenarioMatrix sample_example2(double r, double nu, std::size_t count, std::uint64_t seed);

} // namespace dqlab

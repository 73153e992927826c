#pragma once

#include "dqlab/distributions.hpp"

#include <cstddef>
#include <vector>

namespace dqlab {

// Tail probability level, restricted to (0,1). Small alpha means far tail.
class Level {
public:
    explicit Level(double alpha);
    double value() const { return alpha_; }

private:
    double alpha_;
};

// Sorted empirical distribution with merged atoms, cumulative probabilities
// and tail prefix sums, so VaR/ES queries run in O(log N) after an
// O(N log N) build.
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::vector<double> values);
    EmpiricalDistribution(std::vector<double> values, std::vector<double> probabilities);

    static EmpiricalDistribution from_column(const ScenarioMatrix& scenarios,
                                             std::size_t asset);
    static EmpiricalDistribution from_row_sums(const ScenarioMatrix& scenarios);

    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& cumulative() const { return cumulative_; }

    double mean() const { return mean_; }
    double min_value() const { return values_.front(); }
    double max_value() const { return values_.back(); }

    // P(X > x), used by the exceedance form of DQ.
    double exceedance_probability(double x) const;

private:
    friend double var_empirical(const EmpiricalDistribution&, Level);
    friend double es_empirical(const EmpiricalDistribution&, Level);

    std::vector<double> values_;      // ascending, distinct
    std::vector<double> cumulative_;  // strictly increasing, ends at 1
    std::vector<double> tail_sum_;    // tail_sum_[k] = sum_{j>=k} p_j v_j
    double mean_ = 0.0;
};

// VaR_alpha: smallest value whose cumulative probability reaches 1 - alpha
// (left-continuous inf convention, no interpolation). For uniform weights
// this is the ceil((1-alpha) N)-th order statistic.
double var_empirical(const EmpiricalDistribution& sample, Level alpha);

// ES_alpha: exact integral of the empirical quantile function over the top
// alpha mass, with a fractional weight on the boundary atom.
double es_empirical(const EmpiricalDistribution& sample, Level alpha);

// Quantile function of the superquantile transform: p -> ES_{1-p}.
double superquantile_value(const EmpiricalDistribution& sample, double p);
double superquantile_value(const UnivariateModel& model, double p);

// PELVE: the multiplier c >= 1 with ES_{c alpha}(X) = VaR_alpha(X), found by
// bisection on c in [1, 1/alpha). Throws numerical_error when no root exists
// in the range.
double pelve(const UnivariateModel& model, Level alpha);

} // namespace dqlab

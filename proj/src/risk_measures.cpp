#include "dqlab/risk_measures.hpp"

#include "dqlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dqlab {

namespace {

// Slack for comparisons against probability thresholds; keeps order-statistic
// selection stable when (1-alpha)N lands on a representable boundary.
constexpr double kProbSlack = 1e-12;

} // namespace

Level::Level(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("Level: alpha must lie in (0,1)");
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values)
    : EmpiricalDistribution(std::move(values), {}) {}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values,
                                             std::vector<double> probabilities) {
    const std::size_t n = values.size();
    if (n == 0) throw std::invalid_argument("EmpiricalDistribution: empty sample");
    const bool uniform = probabilities.empty();
    if (!uniform && probabilities.size() != n)
        throw std::invalid_argument("EmpiricalDistribution: probability length mismatch");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    values_.reserve(n);
    std::vector<double> atom_probs;
    atom_probs.reserve(n);
    double total = 0.0;
    for (std::size_t idx : order) {
        const double v = values[idx];
        const double p = uniform ? 1.0 / static_cast<double>(n) : probabilities[idx];
        if (p < 0.0) throw std::invalid_argument("EmpiricalDistribution: negative probability");
        total += p;
        if (!values_.empty() && values_.back() == v) {
            atom_probs.back() += p;
        } else {
            values_.push_back(v);
            atom_probs.push_back(p);
        }
    }
    if (!uniform && std::fabs(total - 1.0) > 1e-10)
        throw std::invalid_argument("EmpiricalDistribution: probabilities must sum to 1");

    const std::size_t m = values_.size();
    cumulative_.resize(m);
    double running_count = 0.0;
    double running_prob = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        if (uniform) {
            // Counting then dividing keeps grid levels like 95/100 exact.
            running_count += atom_probs[k] * static_cast<double>(n);
            cumulative_[k] = std::round(running_count) / static_cast<double>(n);
        } else {
            running_prob += atom_probs[k];
            cumulative_[k] = running_prob;
        }
    }
    cumulative_[m - 1] = 1.0;

    tail_sum_.assign(m + 1, 0.0);
    for (std::size_t k = m; k-- > 0;)
        tail_sum_[k] = tail_sum_[k + 1] + atom_probs[k] * values_[k];
    mean_ = tail_sum_[0];
}

EmpiricalDistribution EmpiricalDistribution::from_column(const ScenarioMatrix& scenarios,
                                                         std::size_t asset) {
    std::vector<double> probs;
    if (!scenarios.has_uniform_probabilities()) {
        probs.resize(scenarios.scenarios());
        for (std::size_t j = 0; j < scenarios.scenarios(); ++j)
            probs[j] = scenarios.probability(j);
    }
    return EmpiricalDistribution(scenarios.column(asset), std::move(probs));
}

EmpiricalDistribution EmpiricalDistribution::from_row_sums(const ScenarioMatrix& scenarios) {
    std::vector<double> probs;
    if (!scenarios.has_uniform_probabilities()) {
        probs.resize(scenarios.scenarios());
        for (std::size_t j = 0; j < scenarios.scenarios(); ++j)
            probs[j] = scenarios.probability(j);
    }
    return EmpiricalDistribution(scenarios.row_sums(), std::move(probs));
}

double EmpiricalDistribution::exceedance_probability(double x) const {
    // First atom strictly above x; P(X > x) = 1 - F(x).
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    if (it == values_.end()) return 0.0;
    const std::size_t k = static_cast<std::size_t>(it - values_.begin());
    return k == 0 ? 1.0 : 1.0 - cumulative_[k - 1];
}

double var_empirical(const EmpiricalDistribution& sample, Level alpha) {
    const double target = 1.0 - alpha.value() - kProbSlack;
    const auto& cum = sample.cumulative();
    const auto it = std::lower_bound(cum.begin(), cum.end(), target);
    const std::size_t k = static_cast<std::size_t>(it - cum.begin());
    return sample.values()[std::min(k, cum.size() - 1)];
}

double es_empirical(const EmpiricalDistribution& sample, Level alpha) {
    const double a = alpha.value();
    const double lower = 1.0 - a;
    const auto& cum = sample.cumulative();
    const auto& vals = sample.values();
    // First atom whose cumulative probability exceeds 1 - alpha; it gets the
    // fractional weight, everything above enters in full.
    const auto it = std::upper_bound(cum.begin(), cum.end(), lower);
    if (it == cum.end()) return vals.back();
    const std::size_t k = static_cast<std::size_t>(it - cum.begin());
    const double boundary = vals[k] * (cum[k] - lower);
    return (boundary + sample.tail_sum_[k + 1]) / a;
}

double superquantile_value(const EmpiricalDistribution& sample, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("superquantile_value: p must lie in (0,1)");
    return es_empirical(sample, Level(1.0 - p));
}

double superquantile_value(const UnivariateModel& model, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("superquantile_value: p must lie in (0,1)");
    return es_analytic(model, 1.0 - p);
}

double pelve(const UnivariateModel& model, Level alpha) {
    const double a = alpha.value();
    const double target = upper_quantile(model, a);
    const double scale = std::max(1.0, std::fabs(target));

    // ES_{c alpha} decreases in c; bracket the root on [1, 1/alpha).
    double lo = 1.0;
    double hi = 1.0 / a * (1.0 - 1e-12);
    const double at_lo = es_analytic(model, lo * a);
    if (at_lo < target - 1e-9 * scale)
        throw numerical_error("pelve: ES_alpha below VaR_alpha; no multiplier in range");
    if (es_analytic(model, hi * a) > target + 1e-9 * scale)
        throw numerical_error("pelve: no root for c in [1, 1/alpha)");

    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double es_mid = es_analytic(model, mid * a);
        if (std::fabs(es_mid - target) <= 1e-9 * scale) return mid;
        if (es_mid > target)
            lo = mid;
        else
            hi = mid;
        if ((hi - lo) * a <= 1e-12) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace dqlab

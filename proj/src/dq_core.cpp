#include "dqlab/dq_core.hpp"

#include "dqlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dqlab {

namespace {

double marginal_risk_sum(const ScenarioMatrix& scenarios, RiskMeasureKind measure,
                         Level alpha) {
    double total = 0.0;
    for (std::size_t i = 0; i < scenarios.assets(); ++i) {
        const auto margin = EmpiricalDistribution::from_column(scenarios, i);
        total += measure == RiskMeasureKind::var ? var_empirical(margin, alpha)
                                                 : es_empirical(margin, alpha);
    }
    return total;
}

// Exact minimum of r -> E[(r (S - t) + 1)_+]. The objective is piecewise
// linear with breakpoints -1/d at the negative deviations d = s - t; after
// sorting, the active set at any r is a suffix, so suffix sums give each
// breakpoint value in O(1).
double rmin_objective_minimum(const std::vector<double>& row_sums,
                              const std::vector<double>& probs_or_empty,
                              std::size_t n_scenarios, double threshold) {
    const double uniform_p = 1.0 / static_cast<double>(n_scenarios);
    std::vector<std::size_t> order(row_sums.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return row_sums[a] < row_sums[b];
    });

    const std::size_t m = order.size();
    std::vector<double> suffix_pd(m + 1, 0.0);
    std::vector<double> suffix_p(m + 1, 0.0);
    for (std::size_t k = m; k-- > 0;) {
        const std::size_t j = order[k];
        const double p = probs_or_empty.empty() ? uniform_p : probs_or_empty[j];
        suffix_pd[k] = suffix_pd[k + 1] + p * (row_sums[j] - threshold);
        suffix_p[k] = suffix_p[k + 1] + p;
    }

    // phi(0+) = 1 bounds the minimum from above.
    double best = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double d = row_sums[order[k]] - threshold;
        if (d >= 0.0) break;
        const double r = -1.0 / d;
        best = std::min(best, r * suffix_pd[k] + suffix_p[k]);
    }
    return std::max(best, 0.0);
}

} // namespace

double alpha_star(const ScenarioMatrix& scenarios, RiskMeasureKind measure, Level alpha) {
    const double threshold = marginal_risk_sum(scenarios, measure, alpha);
    const auto total = EmpiricalDistribution::from_row_sums(scenarios);

    const auto included = [&](double beta) {
        const Level level(beta);
        const double rho = measure == RiskMeasureKind::var ? var_empirical(total, level)
                                                           : es_empirical(total, level);
        return rho <= threshold;
    };

    if (!included(1.0 - 1e-15)) return 1.0;  // inf(empty set) convention
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (included(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

DQResult dq_var(const ScenarioMatrix& scenarios, Level alpha) {
    const double threshold = marginal_risk_sum(scenarios, RiskMeasureKind::var, alpha);
    const auto total = EmpiricalDistribution::from_row_sums(scenarios);
    const double star = total.exceedance_probability(threshold);
    return DQResult{star / alpha.value(), alpha.value(), star, DqMethod::exceedance, {}};
}

DQResult dq_es(const ScenarioMatrix& scenarios, Level alpha, DqMethod method) {
    if (method != DqMethod::rmin && method != DqMethod::bisection)
        throw std::invalid_argument("dq_es: method must be rmin or bisection");
    const double a = alpha.value();
    const double threshold = marginal_risk_sum(scenarios, RiskMeasureKind::es, alpha);

    if (method == DqMethod::bisection) {
        const double star = alpha_star(scenarios, RiskMeasureKind::es, alpha);
        return DQResult{star / a, a, star, DqMethod::bisection, {}};
    }

    const auto row_sums = scenarios.row_sums();
    bool exceeds = false;
    for (std::size_t j = 0; j < row_sums.size(); ++j) {
        if (row_sums[j] > threshold && scenarios.probability(j) > 0.0) {
            exceeds = true;
            break;
        }
    }
    if (!exceeds) return DQResult{0.0, a, 0.0, DqMethod::rmin, {}};

    std::vector<double> probs;
    if (!scenarios.has_uniform_probabilities()) {
        probs.resize(scenarios.scenarios());
        for (std::size_t j = 0; j < probs.size(); ++j) probs[j] = scenarios.probability(j);
    }
    const double star =
        rmin_objective_minimum(row_sums, probs, scenarios.scenarios(), threshold);
    const double value = std::clamp(star / a, 0.0, 1.0);
    return DQResult{value, a, star, DqMethod::rmin, {}};
}

namespace {

ScenarioMatrix interleaved_batch(const ScenarioMatrix& scenarios, int batches, int b) {
    const std::size_t n = scenarios.scenarios();
    std::vector<std::size_t> rows;
    double mass = 0.0;
    for (std::size_t j = static_cast<std::size_t>(b); j < n;
         j += static_cast<std::size_t>(batches)) {
        rows.push_back(j);
        mass += scenarios.probability(j);
    }
    if (rows.empty() || mass <= 0.0)
        throw std::invalid_argument("batch split: too few scenarios for the batch count");

    ScenarioMatrix out(rows.size(), scenarios.assets());
    const bool uniform = scenarios.has_uniform_probabilities();
    std::vector<double> probs;
    if (!uniform) probs.resize(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto src = scenarios.row(rows[k]);
        std::copy(src.begin(), src.end(), out.row(k).begin());
        if (!uniform) probs[k] = scenarios.probability(rows[k]) / mass;
    }
    if (!uniform) out.set_probabilities(std::move(probs));
    return out;
}

DQResult with_batch_stderr(const ScenarioMatrix& scenarios, Level alpha, int batches,
                           RiskMeasureKind measure) {
    if (batches < 2) throw std::invalid_argument("batch split: need at least 2 batches");
    DQResult full = measure == RiskMeasureKind::var ? dq_var(scenarios, alpha)
                                                    : dq_es(scenarios, alpha);
    std::vector<double> estimates;
    estimates.reserve(static_cast<std::size_t>(batches));
    for (int b = 0; b < batches; ++b) {
        const ScenarioMatrix part = interleaved_batch(scenarios, batches, b);
        estimates.push_back(measure == RiskMeasureKind::var ? dq_var(part, alpha).value
                                                            : dq_es(part, alpha).value);
    }
    const double k = static_cast<double>(batches);
    const double avg = std::accumulate(estimates.begin(), estimates.end(), 0.0) / k;
    double ss = 0.0;
    for (double e : estimates) ss += (e - avg) * (e - avg);
    full.std_error = std::sqrt(ss / (k - 1.0) / k);
    return full;
}

} // namespace

DQResult dq_var_with_stderr(const ScenarioMatrix& scenarios, Level alpha, int batches) {
    return with_batch_stderr(scenarios, alpha, batches, RiskMeasureKind::var);
}

DQResult dq_es_with_stderr(const ScenarioMatrix& scenarios, Level alpha, int batches) {
    return with_batch_stderr(scenarios, alpha, batches, RiskMeasureKind::es);
}

double dr(const ScenarioMatrix& scenarios, RiskMeasureKind measure, Level alpha) {
    const double denom = marginal_risk_sum(scenarios, measure, alpha);
    if (denom == 0.0)
        throw std::domain_error("dr: sum of marginal risk measures is zero; DR undefined");
    const auto total = EmpiricalDistribution::from_row_sums(scenarios);
    const double num = measure == RiskMeasureKind::var ? var_empirical(total, alpha)
                                                       : es_empirical(total, alpha);
    return num / denom;
}

} // namespace dqlab

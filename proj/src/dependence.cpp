#include "dqlab/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dqlab {

namespace {

// The grid constructions need alpha N to be a whole number of scenarios.
std::size_t integer_tail_count(double alpha, std::size_t count, const char* where) {
    const double exact = alpha * static_cast<double>(count);
    const double rounded = std::round(exact);
    if (std::fabs(exact - rounded) > 1e-9 || rounded < 1.0)
        throw std::invalid_argument(std::string(where) +
                                    ": alpha * N must be a positive integer");
    return static_cast<std::size_t>(rounded);
}

} // namespace

ScenarioMatrix make_comonotonic(const std::vector<UnivariateModel>& marginals,
                                std::size_t count) {
    if (marginals.empty())
        throw std::invalid_argument("make_comonotonic: needs at least one marginal");
    if (count < 2) throw std::invalid_argument("make_comonotonic: count must be at least 2");
    ScenarioMatrix out(count, marginals.size());
    for (std::size_t j = 0; j < count; ++j) {
        const double u = (static_cast<double>(j) + 0.5) / static_cast<double>(count);
        auto row = out.row(j);
        for (std::size_t i = 0; i < marginals.size(); ++i) row[i] = quantile(marginals[i], u);
    }
    return out;
}

ScenarioMatrix make_alpha_ce(std::size_t n, Level alpha, std::size_t count) {
    if (n < 2) throw std::invalid_argument("make_alpha_ce: n must be at least 2");
    const double a = alpha.value();
    if (!(a < 1.0 / static_cast<double>(n)))
        throw std::invalid_argument("make_alpha_ce: requires alpha < 1/n");
    integer_tail_count(a, count, "make_alpha_ce");

    ScenarioMatrix out(count, n);
    for (std::size_t j = 0; j < count; ++j) {
        const double u = (static_cast<double>(j) + 0.5) / static_cast<double>(count);
        auto row = out.row(j);
        for (std::size_t i = 0; i < n; ++i) {
            const double slice_lo = static_cast<double>(i) * a;
            const double slice_hi = static_cast<double>(i + 1) * a;
            if (u > slice_lo && u <= slice_hi) {
                // Affine decreasing map of the slice onto (1,2).
                row[i] = 1.0 + (slice_hi - u) / a;
            } else if (u <= static_cast<double>(n) * a) {
                row[i] = 1.0;
            } else {
                row[i] = 0.0;
            }
        }
    }
    return out;
}

ScenarioMatrix make_multinomial_onehot(std::size_t n, std::size_t count) {
    if (n < 2) throw std::invalid_argument("make_multinomial_onehot: n must be at least 2");
    if (count == 0 || count % n != 0)
        throw std::invalid_argument("make_multinomial_onehot: count must be divisible by n");
    ScenarioMatrix out(count, n);
    const std::size_t block = count / n;
    for (std::size_t j = 0; j < count; ++j) out.at(j, j / block) = 1.0;
    return out;
}

double dq_es_uniform_pair(double t, Level alpha) {
    if (!(t > 0.0 && t <= 2.0))
        throw std::invalid_argument("dq_es_uniform_pair: t must lie in (0,2]");
    const double a = alpha.value();
    const double positive_part = std::max(0.0, 1.0 - (2.0 - 2.0 * a) / t);
    return positive_part / a;
}

TailEventDiagnostic check_alpha_concentration(const ScenarioMatrix& scenarios, Level alpha) {
    if (!scenarios.has_uniform_probabilities())
        throw std::invalid_argument(
            "check_alpha_concentration: requires uniform scenario probabilities");
    const std::size_t tail =
        integer_tail_count(alpha.value(), scenarios.scenarios(), "check_alpha_concentration");

    TailEventDiagnostic diag;
    diag.alpha = alpha.value();
    diag.per_margin_tail_sets.resize(scenarios.assets());

    std::vector<std::size_t> order(scenarios.scenarios());
    for (std::size_t i = 0; i < scenarios.assets(); ++i) {
        const auto column = scenarios.column(i);
        std::iota(order.begin(), order.end(), 0);
        // Largest values first; ties by ascending scenario index.
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a_, std::size_t b_) {
            return column[a_] > column[b_];
        });
        auto& set = diag.per_margin_tail_sets[i];
        set.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(tail));
        std::sort(set.begin(), set.end());
    }

    diag.is_concentrated = true;
    for (std::size_t i = 1; i < diag.per_margin_tail_sets.size(); ++i) {
        if (diag.per_margin_tail_sets[i] != diag.per_margin_tail_sets[0]) {
            diag.is_concentrated = false;
            break;
        }
    }
    return diag;
}

} // namespace dqlab

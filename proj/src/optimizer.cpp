#include "dqlab/optimizer.hpp"

#include "dqlab/errors.hpp"
#include "dqlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dqlab {

namespace {

std::vector<double> marginal_scales(const Matrix& sigma) {
    std::vector<double> s(sigma.rows());
    for (std::size_t i = 0; i < sigma.rows(); ++i) s[i] = std::sqrt(sigma.at(i, i));
    return s;
}

double k_of_weights(const Matrix& sigma, std::span<const double> w,
                    std::span<const double> sigma_vec) {
    const double num = dot(w, sigma_vec);
    const double denom = std::sqrt(quadratic_form(sigma, w));
    return num / denom;
}

} // namespace

OptimizationReport optimize_elliptical(const EllipticalSpec& spec) {
    const Matrix& sigma = spec.dispersion();
    const std::size_t n = spec.dimension();
    const std::vector<double> sigma_vec = marginal_scales(sigma);
    for (double s : sigma_vec)
        if (!(s > 0.0))
            throw std::invalid_argument("optimize_elliptical: zero marginal scale");

    // Interior candidate z = Sigma^{-1} sigma; valid when componentwise >= 0.
    std::vector<double> z = solve_spd(sigma, sigma_vec);
    bool interior = true;
    for (double zi : z)
        if (zi < 0.0) interior = false;

    int iterations = 1;
    if (!interior) {
        // Active-set iteration for min w' Sigma w s.t. w' sigma = 1, w >= 0;
        // the ratio objective is scale invariant so the normalization below
        // recovers the simplex solution.
        std::vector<bool> active(n, false);
        const int max_rounds = static_cast<int>(3 * n + 10);
        for (int round = 0; round < max_rounds; ++round) {
            ++iterations;
            std::vector<std::size_t> free_idx;
            for (std::size_t i = 0; i < n; ++i)
                if (!active[i]) free_idx.push_back(i);
            if (free_idx.empty())
                throw numerical_error("optimize_elliptical: active set emptied");

            Matrix sub(free_idx.size(), free_idx.size());
            std::vector<double> rhs(free_idx.size());
            for (std::size_t a = 0; a < free_idx.size(); ++a) {
                rhs[a] = sigma_vec[free_idx[a]];
                for (std::size_t b = 0; b < free_idx.size(); ++b)
                    sub.at(a, b) = sigma.at(free_idx[a], free_idx[b]);
            }
            const std::vector<double> w_free = solve_spd(sub, rhs);

            std::fill(z.begin(), z.end(), 0.0);
            double worst = 0.0;
            std::size_t worst_idx = n;
            for (std::size_t a = 0; a < free_idx.size(); ++a) {
                z[free_idx[a]] = w_free[a];
                if (w_free[a] < worst) {
                    worst = w_free[a];
                    worst_idx = free_idx[a];
                }
            }
            if (worst_idx < n) {
                active[worst_idx] = true;
                continue;
            }

            // Check multipliers of the clamped coordinates; release the most
            // negative one if optimality fails.
            const double sTw = dot(std::span<const double>(sigma_vec),
                                   std::span<const double>(z));
            const std::vector<double> grad = mat_vec(sigma, z);
            const double lambda = 2.0 * quadratic_form(sigma, z) / sTw;
            double worst_dual = -1e-12 * std::max(1.0, std::fabs(lambda));
            std::size_t release = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (!active[i]) continue;
                const double dual = 2.0 * grad[i] - lambda * sigma_vec[i];
                if (dual < worst_dual) {
                    worst_dual = dual;
                    release = i;
                }
            }
            if (release == n) break;
            active[release] = false;
        }
    }

    double total = std::accumulate(z.begin(), z.end(), 0.0);
    if (!(total > 0.0))
        throw numerical_error("optimize_elliptical: degenerate solution");
    for (double& zi : z) zi = std::max(zi, 0.0) / total;
    total = std::accumulate(z.begin(), z.end(), 0.0);
    z[0] += 1.0 - total;

    Weights w(std::move(z));
    const double objective = k_of_weights(sigma, w.values(), sigma_vec);
    return OptimizationReport{std::move(w), objective,
                              interior ? OptimizeMethod::closed_form
                                       : OptimizeMethod::qp_fallback,
                              iterations, true};
}

namespace {

std::vector<double> softmax(std::span<const double> theta) {
    const double m = *std::max_element(theta.begin(), theta.end());
    std::vector<double> w(theta.size());
    double total = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        w[i] = std::exp(theta[i] - m);
        total += w[i];
    }
    for (double& x : w) x /= total;
    return w;
}

// Empirical DQ of the weighted portfolio on a fixed scenario set. Positive
// homogeneity lets the marginal risks be precomputed once:
// rho_alpha(w_i X_i) = w_i rho_alpha(X_i).
class EmpiricalDqObjective {
public:
    EmpiricalDqObjective(const ScenarioMatrix& scenarios, RiskMeasureKind measure,
                         Level alpha)
        : scenarios_(scenarios), measure_(measure), alpha_(alpha) {
        for (std::size_t i = 0; i < scenarios.assets(); ++i) {
            const auto margin = EmpiricalDistribution::from_column(scenarios, i);
            marginal_risk_.push_back(measure == RiskMeasureKind::var
                                         ? var_empirical(margin, alpha)
                                         : es_empirical(margin, alpha));
        }
        if (!scenarios.has_uniform_probabilities()) {
            probs_.resize(scenarios.scenarios());
            for (std::size_t j = 0; j < probs_.size(); ++j)
                probs_[j] = scenarios.probability(j);
        }
    }

    double operator()(std::span<const double> w) const {
        const std::size_t n_rows = scenarios_.scenarios();
        const std::size_t n_cols = scenarios_.assets();
        double threshold = 0.0;
        for (std::size_t i = 0; i < n_cols; ++i) threshold += w[i] * marginal_risk_[i];

        std::vector<double> sums(n_rows);
        for (std::size_t j = 0; j < n_rows; ++j) {
            const auto row = scenarios_.row(j);
            double s = 0.0;
            for (std::size_t i = 0; i < n_cols; ++i) s += w[i] * row[i];
            sums[j] = s;
        }

        if (measure_ == RiskMeasureKind::var) {
            double p = 0.0;
            const double uniform_p = 1.0 / static_cast<double>(n_rows);
            for (std::size_t j = 0; j < n_rows; ++j)
                if (sums[j] > threshold) p += probs_.empty() ? uniform_p : probs_[j];
            return p / alpha_.value();
        }

        // The weighted marginal risks are already folded into the threshold,
        // so work on the portfolio sum directly.
        const auto total = EmpiricalDistribution(std::move(sums),
                                                 probs_.empty() ? std::vector<double>{} : probs_);
        if (total.exceedance_probability(threshold) == 0.0) return 0.0;
        return dq_es_against_threshold(total, threshold);
    }

private:
    double dq_es_against_threshold(const EmpiricalDistribution& total,
                                   double threshold) const {
        // alpha_star = inf{beta : ES_beta(S) <= threshold} by predicate
        // bisection, as in alpha_star(); the weighted marginals are already
        // folded into the threshold.
        const auto included = [&](double beta) {
            return es_empirical(total, Level(beta)) <= threshold;
        };
        if (!included(1.0 - 1e-15)) return 1.0 / alpha_.value();
        double lo = 0.0;
        double hi = 1.0;
        for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (included(mid))
                hi = mid;
            else
                lo = mid;
        }
        return hi / alpha_.value();
    }

    const ScenarioMatrix& scenarios_;
    RiskMeasureKind measure_;
    Level alpha_;
    std::vector<double> marginal_risk_;
    std::vector<double> probs_;
};

} // namespace

OptimizationReport optimize_dq_empirical(const ScenarioMatrix& scenarios,
                                         RiskMeasureKind measure, Level alpha) {
    const double tail_scenarios =
        alpha.value() * static_cast<double>(scenarios.scenarios());
    if (tail_scenarios < 20.0)
        throw std::invalid_argument(
            "optimize_dq_empirical: alpha * N below 20; enlarge the scenario set or "
            "raise alpha for a stable tail estimate");

    const std::size_t n = scenarios.assets();
    const EmpiricalDqObjective objective(scenarios, measure, alpha);

    if (n == 1) {
        Weights w(std::vector<double>{1.0});
        const double value = objective(w.values());
        return OptimizationReport{std::move(w), value, OptimizeMethod::simplex_search, 1,
                                  true};
    }

    // Deterministic multi-start: equal weights, vertex-leaning starts, and
    // seeded perturbations up to at least 8 starts.
    std::vector<std::vector<double>> starts;
    starts.emplace_back(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> theta(n, 0.0);
        theta[i] = 2.0;
        starts.push_back(std::move(theta));
    }
    CounterRng rng(20240901u, 0);
    while (starts.size() < 8) {
        std::vector<double> theta(n);
        for (double& t : theta) t = 2.0 * rng.next_uniform() - 1.0;
        starts.push_back(std::move(theta));
    }

    constexpr double kSteps[] = {0.1, 0.03, 0.01, 0.003};
    std::vector<double> best_w;
    double best_value = 0.0;
    int evaluations = 0;
    bool have_best = false;

    for (const auto& start : starts) {
        std::vector<double> theta = start;
        std::vector<double> w = softmax(theta);
        double value = objective(w);
        ++evaluations;
        for (double step : kSteps) {
            bool improved = true;
            while (improved) {
                improved = false;
                for (std::size_t i = 0; i < n; ++i) {
                    for (double direction : {step, -step}) {
                        std::vector<double> cand = theta;
                        cand[i] += direction;
                        const std::vector<double> cw = softmax(cand);
                        const double cv = objective(cw);
                        ++evaluations;
                        if (cv < value) {
                            value = cv;
                            theta = std::move(cand);
                            improved = true;
                        }
                    }
                }
            }
        }
        w = softmax(theta);
        if (!have_best || value < best_value) {
            best_value = value;
            best_w = w;
            have_best = true;
        }
    }

    return OptimizationReport{Weights::normalized(std::move(best_w)), best_value,
                              OptimizeMethod::simplex_search, evaluations, true};
}

namespace {

// Projection onto the standard simplex (Duchi et al. style sort-based rule).
std::vector<double> project_simplex(std::vector<double> v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double running = 0.0;
    double tau = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        running += u[i];
        const double candidate = (running - 1.0) / static_cast<double>(i + 1);
        if (u[i] - candidate > 0.0) tau = candidate;
    }
    for (double& x : v) x = std::max(0.0, x - tau);
    return v;
}

} // namespace

OptimizationReport optimize_mrv_limit(const SpectralMeasure& psi) {
    const double gamma = psi.tail_index();
    if (!(gamma > 1.0))
        throw std::invalid_argument(
            "optimize_mrv_limit: tail index must exceed 1 for a unique optimum");
    const std::size_t n = psi.dimension();

    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> unit(n, 0.0);
        unit[i] = 1.0;
        const double eta_i = eta(unit, psi);
        if (!(eta_i > 0.0))
            throw std::invalid_argument("optimize_mrv_limit: marginal eta must be positive");
        a[i] = std::pow(eta_i, 1.0 / gamma);
    }

    // Substituting v_i = a_i w_i turns the constraint into the standard
    // simplex; the objective g(v) = eta(v / a) stays convex for gamma > 1.
    const auto g = [&](const std::vector<double>& v) {
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = v[i] / a[i];
        return eta(w, psi);
    };
    const auto grad_g = [&](const std::vector<double>& v) {
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = v[i] / a[i];
        std::vector<double> grad(n, 0.0);
        for (const auto& atom : psi.atoms()) {
            double proj = 0.0;
            for (std::size_t i = 0; i < n; ++i) proj += w[i] * atom.direction[i];
            const double factor = atom.weight * gamma * std::pow(proj, gamma - 1.0);
            for (std::size_t i = 0; i < n; ++i)
                grad[i] += factor * atom.direction[i] / a[i];
        }
        return grad;
    };

    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    double value = g(v);
    int iterations = 0;
    bool converged = false;
    double step = 1.0;
    for (; iterations < 50000; ++iterations) {
        const std::vector<double> grad = grad_g(v);

        // Convergence on the unit-step gradient projection residual.
        std::vector<double> probe(n);
        for (std::size_t i = 0; i < n; ++i) probe[i] = v[i] - grad[i];
        probe = project_simplex(std::move(probe));
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            residual += (probe[i] - v[i]) * (probe[i] - v[i]);
        if (std::sqrt(residual) <= 1e-8) {
            converged = true;
            break;
        }

        // Backtracking projected step.
        bool moved = false;
        for (int halving = 0; halving < 60; ++halving) {
            std::vector<double> trial(n);
            for (std::size_t i = 0; i < n; ++i) trial[i] = v[i] - step * grad[i];
            trial = project_simplex(std::move(trial));
            const double trial_value = g(trial);
            if (trial_value < value - 1e-16 * std::fabs(value)) {
                v = std::move(trial);
                value = trial_value;
                moved = true;
                step *= 1.3;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            converged = std::sqrt(residual) <= 1e-6;
            break;
        }
    }

    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = v[i] / a[i];
    Weights weights = Weights::normalized(std::move(w));
    const double objective = dq_limit_mrv(weights, psi);
    return OptimizationReport{std::move(weights), objective, OptimizeMethod::convex_mrv,
                              iterations, converged};
}

} // namespace dqlab

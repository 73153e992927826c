#include "dqlab/distributions.hpp"

#include "dqlab/errors.hpp"
#include "dqlab/rng.hpp"
#include "dqlab/special_functions.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace dqlab {

namespace {

void check_level(double p, const char* where) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument(std::string(where) + ": probability must lie in (0,1)");
}

void validate(const Normal& m) {
    if (!(m.scale > 0.0)) throw std::invalid_argument("Normal: scale must be positive");
}
void validate(const StudentT& m) {
    if (!(m.dof > 0.0)) throw std::invalid_argument("StudentT: dof must be positive");
    if (!(m.scale > 0.0)) throw std::invalid_argument("StudentT: scale must be positive");
}
void validate(const Uniform& m) {
    if (!(m.lower < m.upper)) throw std::invalid_argument("Uniform: requires lower < upper");
}
void validate(const Pareto& m) {
    if (!(m.tail_index > 0.0)) throw std::invalid_argument("Pareto: tail index must be positive");
    if (!(m.scale > 0.0)) throw std::invalid_argument("Pareto: scale must be positive");
}

} // namespace

double quantile(const UnivariateModel& model, double p) {
    check_level(p, "quantile");
    return std::visit(
        [p](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            validate(m);
            if constexpr (std::is_same_v<T, Normal>) {
                return m.loc + m.scale * normal_quantile(p);
            } else if constexpr (std::is_same_v<T, StudentT>) {
                return m.loc + m.scale * student_t_quantile(m.dof, p);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return m.lower + (m.upper - m.lower) * p;
            } else {
                return m.scale * std::pow(1.0 - p, -1.0 / m.tail_index);
            }
        },
        model);
}

double cdf(const UnivariateModel& model, double x) {
    return std::visit(
        [x](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            validate(m);
            if constexpr (std::is_same_v<T, Normal>) {
                return normal_cdf((x - m.loc) / m.scale);
            } else if constexpr (std::is_same_v<T, StudentT>) {
                return student_t_cdf(m.dof, (x - m.loc) / m.scale);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                if (x <= m.lower) return 0.0;
                if (x >= m.upper) return 1.0;
                return (x - m.lower) / (m.upper - m.lower);
            } else {
                if (x <= m.scale) return 0.0;
                return 1.0 - std::pow(x / m.scale, -m.tail_index);
            }
        },
        model);
}

double density(const UnivariateModel& model, double x) {
    return std::visit(
        [x](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            validate(m);
            if constexpr (std::is_same_v<T, Normal>) {
                return normal_pdf((x - m.loc) / m.scale) / m.scale;
            } else if constexpr (std::is_same_v<T, StudentT>) {
                return student_t_pdf(m.dof, (x - m.loc) / m.scale) / m.scale;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return (x >= m.lower && x <= m.upper) ? 1.0 / (m.upper - m.lower) : 0.0;
            } else {
                if (x < m.scale) return 0.0;
                return m.tail_index / m.scale * std::pow(x / m.scale, -m.tail_index - 1.0);
            }
        },
        model);
}

double survival(const UnivariateModel& model, double x) {
    return std::visit(
        [x](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            validate(m);
            if constexpr (std::is_same_v<T, Normal>) {
                return 0.5 * std::erfc((x - m.loc) / m.scale / 1.4142135623730951);
            } else if constexpr (std::is_same_v<T, StudentT>) {
                return student_t_survival(m.dof, (x - m.loc) / m.scale);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                if (x <= m.lower) return 1.0;
                if (x >= m.upper) return 0.0;
                return (m.upper - x) / (m.upper - m.lower);
            } else {
                if (x <= m.scale) return 1.0;
                return std::pow(x / m.scale, -m.tail_index);
            }
        },
        model);
}

double upper_quantile(const UnivariateModel& model, double alpha) {
    check_level(alpha, "upper_quantile");
    return std::visit(
        [alpha](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            validate(m);
            if constexpr (std::is_same_v<T, Normal>) {
                return m.loc - m.scale * normal_quantile(alpha);
            } else if constexpr (std::is_same_v<T, StudentT>) {
                return m.loc + m.scale * student_t_upper_quantile(m.dof, alpha);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return m.upper - (m.upper - m.lower) * alpha;
            } else {
                return m.scale * std::pow(alpha, -1.0 / m.tail_index);
            }
        },
        model);
}

double es_analytic(const UnivariateModel& model, double alpha) {
    check_level(alpha, "es_analytic");
    return std::visit(
        [alpha](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            validate(m);
            if constexpr (std::is_same_v<T, Normal>) {
                const double z = -normal_quantile(alpha);
                return m.loc + m.scale * normal_pdf(z) / alpha;
            } else if constexpr (std::is_same_v<T, StudentT>) {
                if (m.dof <= 1.0)
                    throw unsupported_measure_error(
                        "es_analytic: Student-t with dof <= 1 has no finite mean");
                const double nu = m.dof;
                const double t = student_t_upper_quantile(nu, alpha);
                // Assembled in log space: the pdf underflows far in the tail
                // while the product stays finite.
                const double log_pdf = std::lgamma(0.5 * (nu + 1.0)) -
                                       std::lgamma(0.5 * nu) -
                                       0.5 * std::log(nu * 3.141592653589793) -
                                       0.5 * (nu + 1.0) * std::log1p(t * t / nu);
                const double log_quad = t > 1e8 ? 2.0 * std::log(t) + std::log1p(nu / (t * t))
                                                : std::log(nu + t * t);
                const double es = std::exp(log_pdf + log_quad - std::log(nu - 1.0) -
                                           std::log(alpha));
                return m.loc + m.scale * es;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return m.upper - 0.5 * alpha * (m.upper - m.lower);
            } else {
                if (m.tail_index <= 1.0)
                    throw unsupported_measure_error(
                        "es_analytic: Pareto with tail index <= 1 has no finite mean");
                return m.scale * m.tail_index / (m.tail_index - 1.0) *
                       std::pow(alpha, -1.0 / m.tail_index);
            }
        },
        model);
}

double mean(const UnivariateModel& model) {
    return std::visit(
        [](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            validate(m);
            if constexpr (std::is_same_v<T, Normal>) {
                return m.loc;
            } else if constexpr (std::is_same_v<T, StudentT>) {
                if (m.dof <= 1.0)
                    throw unsupported_measure_error("mean: Student-t with dof <= 1");
                return m.loc;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return 0.5 * (m.lower + m.upper);
            } else {
                if (m.tail_index <= 1.0)
                    throw unsupported_measure_error("mean: Pareto with tail index <= 1");
                return m.scale * m.tail_index / (m.tail_index - 1.0);
            }
        },
        model);
}

// ---------------------------------------------------------------------------
// ScenarioMatrix
// ---------------------------------------------------------------------------

ScenarioMatrix::ScenarioMatrix(std::size_t n_scenarios, std::size_t n_assets)
    : rows_(n_scenarios), cols_(n_assets), data_(n_scenarios * n_assets, 0.0) {
    if (rows_ < 1 || cols_ < 1)
        throw std::invalid_argument("ScenarioMatrix: needs at least one scenario and one asset");
    labels_.reserve(cols_);
    for (std::size_t i = 0; i < cols_; ++i) labels_.push_back("x" + std::to_string(i + 1));
}

std::vector<double> ScenarioMatrix::column(std::size_t asset) const {
    std::vector<double> out(rows_);
    for (std::size_t j = 0; j < rows_; ++j) out[j] = data_[j * cols_ + asset];
    return out;
}

std::vector<double> ScenarioMatrix::row_sums() const {
    std::vector<double> out(rows_, 0.0);
    for (std::size_t j = 0; j < rows_; ++j) {
        double s = 0.0;
        const double* r = data_.data() + j * cols_;
        for (std::size_t i = 0; i < cols_; ++i) s += r[i];
        out[j] = s;
    }
    return out;
}

void ScenarioMatrix::set_probabilities(std::vector<double> probabilities) {
    if (probabilities.empty()) {
        probabilities_.clear();
        return;
    }
    if (probabilities.size() != rows_)
        throw std::invalid_argument("ScenarioMatrix: probability vector length mismatch");
    double total = 0.0;
    for (double p : probabilities) {
        if (p < 0.0) throw std::invalid_argument("ScenarioMatrix: negative probability");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-10)
        throw std::invalid_argument("ScenarioMatrix: probabilities must sum to 1 within 1e-10");
    probabilities_ = std::move(probabilities);
}

void ScenarioMatrix::set_labels(std::vector<std::string> labels) {
    if (labels.size() != cols_)
        throw std::invalid_argument("ScenarioMatrix: label count mismatch");
    labels_ = std::move(labels);
}

// ---------------------------------------------------------------------------
// EllipticalSpec
// ---------------------------------------------------------------------------

EllipticalSpec::EllipticalSpec(EllipticalFamily family, double dof, std::vector<double> mu,
                               Matrix sigma)
    : family_(family), dof_(dof), mu_(std::move(mu)), sigma_(std::move(sigma)) {
    if (sigma_.rows() != sigma_.cols() || sigma_.rows() == 0)
        throw std::invalid_argument("EllipticalSpec: dispersion must be square and nonempty");
    if (mu_.size() != sigma_.rows())
        throw std::invalid_argument("EllipticalSpec: location/dispersion dimension mismatch");
    if (!is_symmetric(sigma_, 1e-12))
        throw std::invalid_argument("EllipticalSpec: dispersion must be symmetric within 1e-12");
    double max_abs = 0.0;
    for (std::size_t i = 0; i < sigma_.rows(); ++i) {
        if (sigma_.at(i, i) < 0.0)
            throw std::invalid_argument("EllipticalSpec: negative diagonal entry");
        for (std::size_t j = 0; j < sigma_.cols(); ++j)
            max_abs = std::max(max_abs, std::fabs(sigma_.at(i, j)));
    }
    if (max_abs == 0.0)
        throw std::invalid_argument("EllipticalSpec: dispersion must not be all zeros");
    // PSD within tolerance; throws if an eigenvalue is below -1e-10 * scale.
    cholesky_psd(sigma_, 1e-10);
    if (family_ == EllipticalFamily::student_t && !(dof_ > 0.0))
        throw std::invalid_argument("EllipticalSpec: Student-t dof must be positive");
}

EllipticalSpec EllipticalSpec::make_normal(std::vector<double> mu, Matrix sigma) {
    return EllipticalSpec(EllipticalFamily::normal, 0.0, std::move(mu), std::move(sigma));
}

EllipticalSpec EllipticalSpec::make_student_t(double dof, std::vector<double> mu,
                                              Matrix sigma) {
    return EllipticalSpec(EllipticalFamily::student_t, dof, std::move(mu), std::move(sigma));
}

UnivariateModel EllipticalSpec::standard_generator() const {
    if (family_ == EllipticalFamily::normal) return Normal{0.0, 1.0};
    return StudentT{dof_, 0.0, 1.0};
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

ScenarioMatrix sample_elliptical(const EllipticalSpec& spec, std::size_t count,
                                 std::uint64_t seed) {
    if (count == 0) throw std::invalid_argument("sample_elliptical: count must be positive");
    const std::size_t n = spec.dimension();
    const Matrix l = cholesky_psd(spec.dispersion(), 1e-10);
    const bool is_t = spec.family() == EllipticalFamily::student_t;
    const double nu = spec.dof();

    ScenarioMatrix out(count, n);
    std::vector<double> z(n);
    for (std::size_t j = 0; j < count; ++j) {
        CounterRng rng(seed, j);
        for (std::size_t i = 0; i < n; ++i) z[i] = rng.next_gaussian();
        // Common chi-square mixing scale makes each margin Student-t(nu).
        const double radial = is_t ? std::sqrt(nu / rng.next_chi_square(nu)) : 1.0;
        auto row = out.row(j);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k <= i; ++k) s += l.at(i, k) * z[k];
            row[i] = spec.location()[i] + radial * s;
        }
    }
    return out;
}

ScenarioMatrix sample_univariate_iid(const UnivariateModel& model, std::size_t count,
                                     std::size_t n_assets, std::uint64_t seed) {
    if (count == 0 || n_assets == 0)
        throw std::invalid_argument("sample_univariate_iid: count and n_assets must be positive");

    const StudentT* as_t = std::get_if<StudentT>(&model);
    ScenarioMatrix out(count, n_assets);
    for (std::size_t j = 0; j < count; ++j) {
        CounterRng rng(seed, j);
        auto row = out.row(j);
        for (std::size_t i = 0; i < n_assets; ++i) {
            if (as_t != nullptr) {
                // Normal/chi-square mixture; much cheaper than inverting the
                // t cdf per draw.
                const double z = rng.next_gaussian();
                const double q = rng.next_chi_square(as_t->dof);
                row[i] = as_t->loc + as_t->scale * z * std::sqrt(as_t->dof / q);
            } else {
                row[i] = quantile(model, rng.next_uniform());
            }
        }
    }
    return out;
}

} // namespace dqlab

#pragma once

#include "dqlab/linalg.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dqlab {

// ---------------------------------------------------------------------------
// Univariate parametric models
// ---------------------------------------------------------------------------

struct Normal {
    double loc = 0.0;
    double scale = 1.0;
};

struct StudentT {
    double dof;
    double loc = 0.0;
    double scale = 1.0;  // dispersion scale, not the standard deviation
};

struct Uniform {
    double lower;
    double upper;
};

// Survival function (x / scale)^(-tail_index) for x >= scale.
struct Pareto {
    double tail_index;
    double scale = 1.0;
};

using UnivariateModel = std::variant<Normal, StudentT, Uniform, Pareto>;

// Left-continuous generalized inverse of the cdf, p in (0,1).
double quantile(const UnivariateModel& model, double p);
double cdf(const UnivariateModel& model, double x);
double density(const UnivariateModel& model, double x);

// Upper tail probability P(X > x); keeps relative accuracy far in the tail
// where 1 - cdf(x) would cancel.
double survival(const UnivariateModel& model, double x);

// VaR_alpha: the quantile at 1 - alpha, evaluated from the tail probability
// directly so levels down to the underflow threshold stay accurate.
double upper_quantile(const UnivariateModel& model, double alpha);

// Closed-form Expected Shortfall at tail probability alpha in (0,1): the
// average of the quantiles above level 1-alpha. Throws
// unsupported_measure_error for infinite-mean models (t with dof <= 1,
// Pareto with tail_index <= 1).
double es_analytic(const UnivariateModel& model, double alpha);

double mean(const UnivariateModel& model);

// ---------------------------------------------------------------------------
// Scenario data
// ---------------------------------------------------------------------------

// N x n matrix of joint loss scenarios with per-scenario probabilities
// (uniform 1/N unless set explicitly). Row j is one joint outcome of the
// n-asset loss vector.
class ScenarioMatrix {
public:
    ScenarioMatrix(std::size_t n_scenarios, std::size_t n_assets);

    std::size_t scenarios() const { return rows_; }
    std::size_t assets() const { return cols_; }

    double& at(std::size_t scenario, std::size_t asset) {
        return data_[scenario * cols_ + asset];
    }
    double at(std::size_t scenario, std::size_t asset) const {
        return data_[scenario * cols_ + asset];
    }
    std::span<const double> row(std::size_t scenario) const {
        return {data_.data() + scenario * cols_, cols_};
    }
    std::span<double> row(std::size_t scenario) {
        return {data_.data() + scenario * cols_, cols_};
    }

    std::vector<double> column(std::size_t asset) const;
    std::vector<double> row_sums() const;

    bool has_uniform_probabilities() const { return probabilities_.empty(); }
    double probability(std::size_t scenario) const {
        return probabilities_.empty() ? 1.0 / static_cast<double>(rows_)
                                      : probabilities_[scenario];
    }
    // Must be nonnegative and sum to 1 within 1e-10.
    void set_probabilities(std::vector<double> probabilities);

    const std::vector<std::string>& labels() const { return labels_; }
    void set_labels(std::vector<std::string> labels);

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
    std::vector<double> probabilities_;  // empty means uniform
    std::vector<std::string> labels_;
};

// ---------------------------------------------------------------------------
// Elliptical model specification
// ---------------------------------------------------------------------------

enum class EllipticalFamily { normal, student_t };

// Location-dispersion elliptical model; the family tag fixes the
// characteristic generator (multivariate normal or Student-t).
class EllipticalSpec {
public:
    static EllipticalSpec make_normal(std::vector<double> mu, Matrix sigma);
    static EllipticalSpec make_student_t(double dof, std::vector<double> mu, Matrix sigma);

    EllipticalFamily family() const { return family_; }
    double dof() const { return dof_; }
    std::size_t dimension() const { return mu_.size(); }
    const std::vector<double>& location() const { return mu_; }
    const Matrix& dispersion() const { return sigma_; }

    // Y ~ E1(0, 1, tau): the standardized margin generator of the family.
    UnivariateModel standard_generator() const;

private:
    EllipticalSpec(EllipticalFamily family, double dof, std::vector<double> mu,
                   Matrix sigma);

    EllipticalFamily family_;
    double dof_;
    std::vector<double> mu_;
    Matrix sigma_;
};

// ---------------------------------------------------------------------------
// Samplers (deterministic for fixed seed; one counter stream per scenario)
// ---------------------------------------------------------------------------

ScenarioMatrix sample_elliptical(const EllipticalSpec& spec, std::size_t count,
                                 std::uint64_t seed);

// Independent draws, one column per asset, all columns from the same model.
ScenarioMatrix sample_univariate_iid(const UnivariateModel& model, std::size_t count,
                                     std::size_t n_assets, std::uint64_t seed);

} // namespace dqlab

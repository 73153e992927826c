#include "dqlab/elliptical.hpp"

#include "dqlab/errors.hpp"
#include "dqlab/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <initializer_list>

using namespace dqlab;

namespace {

std::vector<double> zeros(std::size_t n) { return std::vector<double>(n, 0.0); }

Matrix rank_one(const std::vector<double>& s) {
    Matrix m(s.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) m.at(i, j) = s[i] * s[j];
    return m;
}

// Independent oracle for DQ^ES of the t model: the r-minimization formula of
// the continuous model, E[(r(S - t) + 1)_+] evaluated with the closed-form
// upper partial moment of the t distribution and minimized by golden section.
double dq_es_t_rmin_oracle(double nu, double k_value, double alpha) {
    const double threshold = k_value * es_analytic(StudentT{nu, 0.0, 1.0}, alpha);
    const auto objective = [&](double log_r) {
        const double r = std::exp(log_r);
        const double a = r;          // S normalized to E1(0,1): scale folded into k
        const double b = 1.0 - r * threshold;
        const double c = -b / a;
        const double partial =
            student_t_pdf(nu, c) * (nu + c * c) / (nu - 1.0);
        return a * partial + b * student_t_survival(nu, c);
    };
    double lo = std::log(1e-8);
    double hi = std::log(1e6);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    for (int i = 0; i < 300; ++i) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo); f1 = objective(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo); f2 = objective(x2);
        }
    }
    return std::min(f1, f2) / alpha;
}

} // namespace

TEST_SUITE("elliptical") {

TEST_CASE("k_sigma reproduces the reference dispersion constants") {
    CHECK(k_sigma(sigma_equicorrelated(4, 0.3)).k_sigma ==
          doctest::Approx(1.4510).epsilon(1e-4 / 1.4510));
    CHECK(k_sigma(sigma_ar1(4, 0.3)).k_sigma ==
          doctest::Approx(1.6046).epsilon(1e-4 / 1.6046));
    // Rank-one dispersion is the comonotone case: k = 1 exactly.
    CHECK(k_sigma(rank_one({1.0, 2.0, 3.0})).k_sigma == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(k_sigma(Matrix(3, 3, 0.0)), std::invalid_argument);
}

TEST_CASE("DispersionSummary: average correlation is 1/k^2 and k >= 1") {
    for (double r : {0.0, 0.1, 0.45, 0.9}) {
        for (std::size_t n : {2u, 4u, 17u}) {
            const auto summary = k_sigma(sigma_equicorrelated(n, r));
            CHECK(summary.k_sigma >= 1.0 - 1e-12);
            CHECK(summary.avg_correlation ==
                  doctest::Approx(1.0 / (summary.k_sigma * summary.k_sigma)).epsilon(1e-14));
        }
    }
}

TEST_CASE("dq_var_elliptical: reference table values") {
    const auto n1 = EllipticalSpec::make_normal(zeros(4), sigma_equicorrelated(4, 0.3));
    const auto t1 =
        EllipticalSpec::make_student_t(3.0, zeros(4), sigma_equicorrelated(4, 0.3));
    CHECK(dq_var_elliptical(n1, Level(0.01)).value == doctest::Approx(0.0369).epsilon(0.0005 / 0.0369));
    CHECK(dq_var_elliptical(t1, Level(0.01)).value == doctest::Approx(0.3558).epsilon(0.003 / 0.3558));

    const auto comono = EllipticalSpec::make_normal(zeros(3), rank_one({1.0, 2.0, 3.0}));
    CHECK(dq_var_elliptical(comono, Level(0.05)).value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("dq_var_elliptical is independent of the location") {
    const Matrix sigma = sigma_ar1(3, 0.4);
    const auto centered = EllipticalSpec::make_normal(zeros(3), sigma);
    const auto shifted = EllipticalSpec::make_normal({10.0, -5.0, 2.0}, sigma);
    for (double a : {0.01, 0.05, 0.3}) {
        CHECK(dq_var_elliptical(centered, Level(a)).value ==
              dq_var_elliptical(shifted, Level(a)).value);
    }
}

TEST_CASE("dq_var_elliptical range split at alpha = 1/2") {
    const auto spec = EllipticalSpec::make_student_t(2.0, zeros(4), sigma_equicorrelated(4, 0.5));
    for (double a : {0.01, 0.2, 0.5}) {
        const double v = dq_var_elliptical(spec, Level(a)).value;
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
    }
    for (double a : {0.6, 0.8, 0.95}) {
        const double v = dq_var_elliptical(spec, Level(a)).value;
        CHECK(v >= 1.0 - 1e-12);
        CHECK(v <= 2.0 + 1e-12);
    }
}

TEST_CASE("dq_es_elliptical: normal table value and the rank-one case") {
    const auto n1 = EllipticalSpec::make_normal(zeros(4), sigma_equicorrelated(4, 0.3));
    CHECK(dq_es_elliptical(n1, Level(0.0258)).value ==
          doctest::Approx(0.0377).epsilon(0.003 / 0.0377));
    const auto comono = EllipticalSpec::make_student_t(5.0, zeros(2), rank_one({1.0, 3.0}));
    CHECK(dq_es_elliptical(comono, Level(0.05)).value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("dq_es_elliptical t model agrees with the independent r-min oracle") {
    // The published table lists 0.3373 for this entry; the model's own
    // formulas give ~0.3595 by every route (alpha* bisection here, the exact
    // r-minimization below, and Monte Carlo in the acceptance suite).
    const auto t1 =
        EllipticalSpec::make_student_t(3.0, zeros(4), sigma_equicorrelated(4, 0.3));
    const double k = k_sigma(sigma_equicorrelated(4, 0.3)).k_sigma;
    for (double a : {0.0331, 0.01, 0.05}) {
        const double via_alpha_star = dq_es_elliptical(t1, Level(a)).value;
        const double via_rmin = dq_es_t_rmin_oracle(3.0, k, a);
        CHECK(via_alpha_star == doctest::Approx(via_rmin).epsilon(1e-5));
    }
    CHECK(dq_es_elliptical(t1, Level(0.0331)).value ==
          doctest::Approx(0.35948).epsilon(1e-3));
}

TEST_CASE("monotonicity in k_sigma") {
    // Equicorrelated r sweeps k downward as r grows; DQ must move the
    // documented way at each alpha.
    const std::vector<double> rs = {0.05, 0.2, 0.4, 0.6, 0.8, 0.95};
    for (double a : {0.01, 0.3}) {
        double prev_var = -1.0;
        double prev_es = -1.0;
        for (double r : rs) {
            const auto nspec = EllipticalSpec::make_normal(zeros(4), sigma_equicorrelated(4, r));
            const double k = k_sigma(nspec.dispersion()).k_sigma;
            const double v = dq_var_elliptical(nspec, Level(a)).value;
            const double e = dq_es_elliptical(nspec, Level(a)).value;
            // r up means k down; alpha <= 1/2 so both DQs must not decrease.
            if (prev_var >= 0.0) {
                CHECK(v >= prev_var - 1e-12);
                CHECK(e >= prev_es - 1e-12);
            }
            prev_var = v;
            prev_es = e;
            CHECK(k >= 1.0);
        }
    }
    // alpha > 1/2: DQ^VaR now increases with k (decreases as r grows),
    // while DQ^ES keeps the same direction as before.
    double prev = 10.0;
    double prev_es = -1.0;
    for (double r : rs) {
        const auto nspec = EllipticalSpec::make_normal(zeros(4), sigma_equicorrelated(4, r));
        const double v = dq_var_elliptical(nspec, Level(0.8)).value;
        const double e = dq_es_elliptical(nspec, Level(0.8)).value;
        CHECK(v <= prev + 1e-12);
        CHECK(e >= prev_es - 1e-12);
        prev = v;
        prev_es = e;
    }
}

TEST_CASE("negative off-diagonals are supported while PSD") {
    const Matrix sigma = sigma_equicorrelated(3, -0.2);
    const auto summary = k_sigma(sigma);
    CHECK(summary.k_sigma == doctest::Approx(3.0 / std::sqrt(1.8)).epsilon(1e-12));
    const auto spec = EllipticalSpec::make_student_t(3.0, zeros(3), sigma);
    const double v = dq_var_elliptical(spec, Level(0.05)).value;
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    // Below the PSD boundary r = -1/(n-1) construction must fail.
    CHECK_THROWS_AS(sigma_equicorrelated(3, -0.6), std::invalid_argument);
}

TEST_CASE("small-alpha limits") {
    const Matrix s1 = sigma_equicorrelated(4, 0.3);
    const auto normal = EllipticalSpec::make_normal(zeros(4), s1);
    const auto t3 = EllipticalSpec::make_student_t(3.0, zeros(4), s1);
    CHECK(dq_var_limit(normal) == 0.0);
    CHECK(dq_var_limit(t3) == doctest::Approx(0.3273).epsilon(1e-4 / 0.3273));
    const auto comono = EllipticalSpec::make_normal(zeros(2), rank_one({2.0, 5.0}));
    CHECK(dq_var_limit(comono) == 1.0);

    // Finite alpha approaches the limit.
    CHECK(dq_var_elliptical(normal, Level(1e-6)).value <= 0.01);
    CHECK(dq_var_elliptical(t3, Level(1e-4)).value ==
          doctest::Approx(std::pow(k_sigma(s1).k_sigma, -3.0)).epsilon(0.02 / 0.3273));
    // ES limit coincides for the t family.
    CHECK(dq_es_elliptical(t3, Level(1e-4)).value ==
          doctest::Approx(std::pow(k_sigma(s1).k_sigma, -3.0)).epsilon(0.02 / 0.3273));
}

TEST_CASE("generic density-ratio limit") {
    const double k = 1.4510;
    SUBCASE("t3 density recovers k^-3") {
        const auto t3_density = [](double x) { return student_t_pdf(3.0, x); };
        CHECK(dq_var_limit_density(t3_density, k) ==
              doctest::Approx(std::pow(k, -3.0)).epsilon(1e-3));
    }
    SUBCASE("normal density converges to zero") {
        const auto normal_density = [](double x) { return normal_pdf(x); };
        CHECK(dq_var_limit_density(normal_density, k) <= 1e-6);
    }
    SUBCASE("oscillating ratio is rejected") {
        const auto wobble = [](double x) { return std::exp(std::sin(3.0 * std::log(x))); };
        CHECK_THROWS_AS(dq_var_limit_density(wobble, k), numerical_error);
    }
}

TEST_CASE("dr_elliptical") {
    const Matrix s1 = sigma_equicorrelated(4, 0.3);
    const double inv_k = 1.0 / k_sigma(s1).k_sigma;
    const auto centered = EllipticalSpec::make_normal(zeros(4), s1);
    SUBCASE("centered: always 1/k for both measures and any family") {
        CHECK(dr_elliptical(centered, RiskMeasureKind::var, Level(0.05)) ==
              doctest::Approx(0.6892).epsilon(1e-4 / 0.6892));
        CHECK(dr_elliptical(centered, RiskMeasureKind::var, Level(0.05)) ==
              dr_elliptical(centered, RiskMeasureKind::es, Level(0.01)));
        const auto t9 = EllipticalSpec::make_student_t(9.0, zeros(4), s1);
        CHECK(dr_elliptical(t9, RiskMeasureKind::var, Level(0.05)) ==
              doctest::Approx(inv_k).epsilon(1e-12));
    }
    SUBCASE("nonzero location enters the general formula") {
        const auto shifted = EllipticalSpec::make_normal({10.0, 10.0, 10.0, 10.0}, s1);
        const double got = dr_elliptical(shifted, RiskMeasureKind::var, Level(0.05));
        const double rho = -normal_quantile(0.05);
        const double expected =
            (40.0 + std::sqrt(4.0 + 12.0 * 0.3) * rho) / (40.0 + 4.0 * rho);
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
        CHECK(got != doctest::Approx(inv_k).epsilon(0.01));
    }
}

TEST_CASE("average-correlation limit trends in the dimension") {
    // Equicorrelated keeps AC -> r > 0; AR(1) sends AC -> 0. DQ follows.
    std::vector<double> eq_values;
    std::vector<double> ar_values;
    for (std::size_t n : {2u, 10u, 30u, 60u, 100u}) {
        const auto eq = EllipticalSpec::make_student_t(3.0, zeros(n), sigma_equicorrelated(n, 0.5));
        const auto ar = EllipticalSpec::make_student_t(3.0, zeros(n), sigma_ar1(n, 0.5));
        eq_values.push_back(dq_var_elliptical(eq, Level(0.05)).value);
        ar_values.push_back(dq_var_elliptical(ar, Level(0.05)).value);
    }
    for (std::size_t i = 1; i < 5; ++i) {
        CHECK(ar_values[i] <= ar_values[i - 1] + 1e-12);
        CHECK(eq_values[i] <= eq_values[i - 1] + 1e-12);
    }
    CHECK(ar_values.back() < 0.05);                    // AC -> 0: vanishing DQ
    const double k_inf = 1.0 / std::sqrt(0.5);         // AC -> r: positive limit
    CHECK(eq_values.back() > 0.9 * std::pow(k_inf, -3.0));
}

TEST_CASE("spec validation") {
    Matrix asym(2, 2);
    asym.at(0, 0) = asym.at(1, 1) = 1.0;
    asym.at(0, 1) = 0.5;
    asym.at(1, 0) = 0.500001;
    CHECK_THROWS_AS(EllipticalSpec::make_normal({0.0, 0.0}, asym), std::invalid_argument);
    CHECK_THROWS_AS(EllipticalSpec::make_student_t(-1.0, zeros(2), Matrix::identity(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(EllipticalSpec::make_normal({0.0}, Matrix::identity(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(dq_es_elliptical(EllipticalSpec::make_student_t(0.9, zeros(2),
                                                                    Matrix::identity(2)),
                                     Level(0.05)),
                    unsupported_measure_error);
}

} // TEST_SUITE

#include "dqlab/optimizer.hpp"

#include "dqlab/dependence.hpp"
#include "dqlab/elliptical.hpp"
#include "dqlab/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <stdexcept>

using namespace dqlab;

namespace {

Matrix example1_sigma() {
    Matrix s(2, 2);
    s.at(0, 0) = 1.0;
    s.at(0, 1) = s.at(1, 0) = 0.5;
    s.at(1, 1) = 2.0;
    return s;
}

Matrix redundant_asset_sigma() {
    // Asset 2 is nearly a leveraged copy of asset 1, so the unconstrained
    // maximum-diversification weights short it and the QP fallback engages.
    Matrix s(3, 3);
    const double corr[3][3] = {{1.0, 0.98, 0.3}, {0.98, 1.0, 0.4}, {0.3, 0.4, 1.0}};
    const double sd[3] = {1.0, 2.5, 1.5};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s.at(i, j) = corr[i][j] * sd[i] * sd[j];
    return s;
}

double dq_var_weighted(const EllipticalSpec& base, std::span<const double> w, Level alpha) {
    const std::size_t n = base.dimension();
    Matrix sw(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            sw.at(i, j) = w[i] * w[j] * base.dispersion().at(i, j);
    const auto spec = base.family() == EllipticalFamily::normal
                          ? EllipticalSpec::make_normal(std::vector<double>(n, 0.0), sw)
                          : EllipticalSpec::make_student_t(base.dof(),
                                                           std::vector<double>(n, 0.0), sw);
    return dq_var_elliptical(spec, alpha).value;
}

std::vector<double> random_simplex_point(CounterRng& rng, std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) {
        x = -std::log(rng.next_uniform());
        total += x;
    }
    for (double& x : w) x /= total;
    return w;
}

} // namespace

TEST_SUITE("optimizer") {

TEST_CASE("optimize_elliptical: closed-form cases") {
    SUBCASE("reference two-asset model") {
        const auto spec = EllipticalSpec::make_student_t(3.0, {0.0, 0.0}, example1_sigma());
        const auto report = optimize_elliptical(spec);
        CHECK(report.weights[0] == doctest::Approx(0.5860).epsilon(0.001 / 0.5860));
        CHECK(report.weights[1] == doctest::Approx(0.4140).epsilon(0.001 / 0.4140));
        CHECK(report.method == OptimizeMethod::closed_form);
        CHECK(report.converged);
    }
    SUBCASE("identity dispersion gives equal weights") {
        const auto spec = EllipticalSpec::make_normal({0.0, 0.0, 0.0}, Matrix::identity(3));
        const auto report = optimize_elliptical(spec);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(report.weights[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("diagonal dispersion: hand-solved weights") {
        Matrix d(2, 2);
        d.at(0, 0) = 1.0;
        d.at(1, 1) = 4.0;
        const auto spec = EllipticalSpec::make_normal({0.0, 0.0}, d);
        const auto report = optimize_elliptical(spec);
        CHECK(report.weights[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(report.weights[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("optimize_elliptical: QP fallback clamps the shorted asset") {
    const auto spec = EllipticalSpec::make_normal({0.0, 0.0, 0.0}, redundant_asset_sigma());
    const auto report = optimize_elliptical(spec);
    CHECK(report.method == OptimizeMethod::qp_fallback);
    // Verified against a 0.001-resolution grid scan of k(w).
    CHECK(report.weights[0] == doctest::Approx(0.6).epsilon(1e-6));
    CHECK(report.weights[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(report.weights[2] == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(report.objective == doctest::Approx(1.240347).epsilon(1e-6));
}

TEST_CASE("optimize_elliptical: invariances") {
    const auto base = optimize_elliptical(
        EllipticalSpec::make_normal({0.0, 0.0}, example1_sigma()));
    SUBCASE("location does not matter") {
        const auto shifted = optimize_elliptical(
            EllipticalSpec::make_normal({17.0, -4.0}, example1_sigma()));
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(shifted.weights[i] == doctest::Approx(base.weights[i]).epsilon(1e-12));
    }
    SUBCASE("dispersion rescaling does not matter") {
        Matrix scaled = example1_sigma();
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) scaled.at(i, j) *= 13.7;
        const auto report = optimize_elliptical(EllipticalSpec::make_normal({0.0, 0.0}, scaled));
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(report.weights[i] == doctest::Approx(base.weights[i]).epsilon(1e-12));
    }
    SUBCASE("family does not matter") {
        const auto t_report = optimize_elliptical(
            EllipticalSpec::make_student_t(5.0, {0.0, 0.0}, example1_sigma()));
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(t_report.weights[i] == doctest::Approx(base.weights[i]).epsilon(1e-12));
    }
}

TEST_CASE("optimizer weights beat 200 random simplex points for DQ") {
    const auto spec = EllipticalSpec::make_student_t(3.0, {0.0, 0.0}, example1_sigma());
    const auto report = optimize_elliptical(spec);
    CounterRng rng(2718, 0);
    for (double a : {0.01, 0.05}) {
        const double at_optimum = dq_var_weighted(spec, report.weights.values(), Level(a));
        for (int i = 0; i < 200; ++i) {
            const auto w = random_simplex_point(rng, 2);
            CHECK(at_optimum <= dq_var_weighted(spec, w, Level(a)) + 1e-9);
        }
    }
}

TEST_CASE("optimize_dq_empirical") {
    SUBCASE("guard on the tail sample size") {
        ScenarioMatrix tiny(100, 2);
        CHECK_THROWS_AS(optimize_dq_empirical(tiny, RiskMeasureKind::var, Level(0.05)),
                        std::invalid_argument);
    }
    SUBCASE("single asset returns the trivial weight") {
        const auto sample = sample_univariate_iid(Normal{0.0, 1.0}, 10000, 1, 1);
        const auto report = optimize_dq_empirical(sample, RiskMeasureKind::var, Level(0.05));
        CHECK(report.weights.size() == 1);
        CHECK(report.weights[0] == 1.0);
        CHECK(report.converged);
    }
    SUBCASE("comonotonic scenarios: objective is flat at 1") {
        const std::vector<UnivariateModel> marginals = {Normal{0.0, 1.0}, Normal{0.0, 2.0}};
        const auto grid = make_comonotonic(marginals, 20000);
        const auto report = optimize_dq_empirical(grid, RiskMeasureKind::var, Level(0.05));
        CHECK(report.converged);
        CHECK(report.objective == doctest::Approx(1.0).epsilon(0.01));
    }
    SUBCASE("recovers the closed-form weights on sampled scenarios") {
        const auto spec = EllipticalSpec::make_student_t(3.0, {0.0, 0.0}, example1_sigma());
        const auto sample = sample_elliptical(spec, 100000, 314159);
        const auto report = optimize_dq_empirical(sample, RiskMeasureKind::var, Level(0.05));
        CHECK(report.weights[0] == doctest::Approx(0.5860).epsilon(0.05 / 0.5860));
        // Never worse than the equal-weight start.
        ScenarioMatrix equal_weighted(sample.scenarios(), 2);
        for (std::size_t j = 0; j < sample.scenarios(); ++j) {
            equal_weighted.at(j, 0) = 0.5 * sample.at(j, 0);
            equal_weighted.at(j, 1) = 0.5 * sample.at(j, 1);
        }
        CHECK(report.objective <= dq_var(equal_weighted, Level(0.05)).value + 1e-12);
    }
    SUBCASE("ES objective runs and stays inside its range") {
        const auto spec = EllipticalSpec::make_normal({0.0, 0.0}, example1_sigma());
        const auto sample = sample_elliptical(spec, 20000, 999);
        const auto report = optimize_dq_empirical(sample, RiskMeasureKind::es, Level(0.05));
        CHECK(report.objective >= 0.0);
        CHECK(report.objective <= 1.0 + 1e-12);
        CHECK(report.weights[0] == doctest::Approx(0.5860).epsilon(0.12 / 0.5860));
    }
}

TEST_CASE("empirical DR and DQ minimizers agree for centered elliptical scenarios") {
    const auto spec = EllipticalSpec::make_student_t(4.0, {0.0, 0.0}, example1_sigma());
    const auto sample = sample_elliptical(spec, 100000, 271828);
    const Level alpha(0.05);

    // Grid scan over w1 of both empirical objectives on the same sample.
    double best_dq = 1e300, best_dq_w = -1.0;
    double best_dr = 1e300, best_dr_w = -1.0;
    ScenarioMatrix weighted(sample.scenarios(), 2);
    for (double w1 = 0.02; w1 <= 0.98 + 1e-12; w1 += 0.02) {
        for (std::size_t j = 0; j < sample.scenarios(); ++j) {
            weighted.at(j, 0) = w1 * sample.at(j, 0);
            weighted.at(j, 1) = (1.0 - w1) * sample.at(j, 1);
        }
        const double dq_value = dq_var(weighted, alpha).value;
        const double dr_value = dr(weighted, RiskMeasureKind::var, alpha);
        if (dq_value < best_dq) {
            best_dq = dq_value;
            best_dq_w = w1;
        }
        if (dr_value < best_dr) {
            best_dr = dr_value;
            best_dr_w = w1;
        }
    }
    CHECK(std::fabs(best_dq_w - best_dr_w) <= 0.1);
    CHECK(best_dq_w == doctest::Approx(0.586).epsilon(0.08 / 0.586));
}

TEST_CASE("optimize_mrv_limit") {
    SUBCASE("iid measure: equal weights and n^(1-gamma)") {
        for (double gamma : {1.5, 2.0, 3.0}) {
            const auto psi = SpectralMeasure::iid(4, gamma);
            const auto report = optimize_mrv_limit(psi);
            CHECK(report.converged);
            for (std::size_t i = 0; i < 4; ++i)
                CHECK(report.weights[i] == doctest::Approx(0.25).epsilon(1e-6));
            CHECK(report.objective ==
                  doctest::Approx(dq_limit_iid(4, gamma)).epsilon(1e-9));
        }
    }
    SUBCASE("factor example matches a 1e-4 grid scan of the closed form") {
        const double r = 0.3;
        const double nu = 2.0;
        const auto report = optimize_mrv_limit(example2_spectral(r, nu));
        double best_w1 = -1.0;
        double best_value = 1e300;
        for (double w1 = 0.0; w1 <= 1.0 + 1e-12; w1 += 1e-4) {
            const double value = example2_f(Weights::normalized({w1, 1.0 - w1}), r, nu);
            if (value < best_value) {
                best_value = value;
                best_w1 = w1;
            }
        }
        CHECK(report.weights[0] == doctest::Approx(best_w1).epsilon(1e-3 / best_w1));
        CHECK(report.objective == doctest::Approx(best_value).epsilon(1e-6));
    }
    SUBCASE("asymmetric two-atom measure matches the grid oracle") {
        SpectralMeasure psi({SpectralAtom{{0.8, 0.2}, 0.7}, SpectralAtom{{0.1, 0.9}, 0.3}},
                            2.5);
        const auto report = optimize_mrv_limit(psi);
        double best_w1 = -1.0;
        double best_value = 1e300;
        for (double w1 = 0.0; w1 <= 1.0 + 1e-12; w1 += 1e-4) {
            const double value = dq_limit_mrv(Weights::normalized({w1, 1.0 - w1}), psi);
            if (value < best_value) {
                best_value = value;
                best_w1 = w1;
            }
        }
        CHECK(report.weights[0] == doctest::Approx(best_w1).epsilon(1e-3));
        CHECK(report.objective <= best_value + 1e-9);
    }
    SUBCASE("tail index at most 1 is rejected") {
        CHECK_THROWS_AS(optimize_mrv_limit(SpectralMeasure::iid(3, 1.0)),
                        std::invalid_argument);
        CHECK_THROWS_AS(optimize_mrv_limit(SpectralMeasure::iid(3, 0.5)),
                        std::invalid_argument);
    }
}

} // TEST_SUITE

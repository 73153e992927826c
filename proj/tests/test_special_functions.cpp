#include "dqlab/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <initializer_list>

using namespace dqlab;

namespace {

// Independent oracle: invert a cdf by plain bisection on a wide bracket.
template <typename Cdf>
double bisect_inverse(Cdf cdf, double p, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Closed-form t cdf for dof = 3:
// F(x) = 1/2 + (1/pi) [ (x/sqrt(3)) / (1 + x^2/3) + atan(x/sqrt(3)) ].
double t3_cdf_closed_form(double x) {
    const double z = x / std::sqrt(3.0);
    return 0.5 + (z / (1.0 + x * x / 3.0) + std::atan(z)) / 3.141592653589793;
}

} // namespace

TEST_SUITE("special_functions") {

TEST_CASE("normal quantile agrees with a bisection oracle on the cdf") {
    for (double p : {0.001, 0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99, 0.999}) {
        const double oracle = bisect_inverse([](double x) { return normal_cdf(x); }, p,
                                             -40.0, 40.0);
        CHECK(normal_quantile(p) == doctest::Approx(oracle).epsilon(1e-12));
    }
    CHECK(normal_quantile(0.95) == doctest::Approx(1.6449).epsilon(1e-4));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("normal cdf/pdf basics") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
    // Far tail keeps relative accuracy.
    CHECK(normal_cdf(-8.0) == doctest::Approx(6.22096e-16).epsilon(1e-4));
}

TEST_CASE("student t cdf matches the dof=3 closed form") {
    for (double x : {-6.5889, -2.0, -0.5, 0.0, 0.5, 2.0, 6.5889}) {
        CHECK(student_t_cdf(3.0, x) ==
              doctest::Approx(t3_cdf_closed_form(x)).epsilon(1e-12));
    }
    CHECK(student_t_cdf(3.0, 6.5889) == doctest::Approx(0.99643).epsilon(5e-5));
}

TEST_CASE("student t quantile round-trips through the cdf") {
    for (double dof : {0.5, 1.0, 2.5, 3.0, 7.5}) {
        for (double p : {0.01, 0.1, 0.5, 0.9, 0.975, 0.999}) {
            const double x = student_t_quantile(dof, p);
            CHECK(student_t_cdf(dof, x) == doctest::Approx(p).epsilon(1e-9));
        }
    }
}

TEST_CASE("incomplete beta sanity") {
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(1,1) = x.
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-14));
    // Symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
    const double lhs = regularized_incomplete_beta(2.5, 0.5, 0.3);
    const double rhs = 1.0 - regularized_incomplete_beta(0.5, 2.5, 0.7);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

} // TEST_SUITE

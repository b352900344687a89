#include "needlet_lq/quadrature.hpp"
#include "needlet_lq/special_functions.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace nlq;
using std::numbers::pi;

namespace {

// int_{-1}^{1} t^j (1-t^2)^alpha dt = B((j+1)/2, alpha+1) for even j.
double line_moment(int j, double alpha) {
    if (j % 2) return 0.0;
    return std::exp(std::lgamma((j + 1) / 2.0) + std::lgamma(alpha + 1.0) - std::lgamma((j + 1) / 2.0 + alpha + 1.0));
}

}  // namespace

TEST_CASE("gauss_jacobi_rule examples") {
    const Rule1D one = gauss_jacobi_rule(1, 0.5);
    REQUIRE(one.nodes.size() == 1);
    CHECK(std::abs(one.nodes[0]) < 1e-15);
    CHECK(one.weights[0] == doctest::Approx(pi / 2).epsilon(1e-14));

    const Rule1D legendre = gauss_jacobi_rule(5, 0.0);
    double total = 0.0;
    for (double w : legendre.weights) total += w;
    CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(integrate(gauss_jacobi_rule(2, 0.0), [](double t) { return t * t; }) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(gauss_jacobi_rule(3, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_jacobi_rule(0, 0.0), std::invalid_argument);
}

TEST_CASE("gauss_jacobi_rule moments, ordering and positivity") {
    for (double alpha : {-0.5, 0.0, 0.5, 1.0, 2.5}) {
        for (int npoints : {1, 3, 8, 15}) {
            const Rule1D rule = gauss_jacobi_rule(npoints, alpha);
            CHECK(rule.exact_degree == 2 * npoints - 1);
            CHECK(rule.weight_exponent() == alpha);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                CHECK(rule.weights[i] > 0.0);
                CHECK(std::abs(rule.nodes[i]) < 1.0);
                if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
            }
            for (int j = 0; j <= rule.exact_degree; ++j) {
                const double exact = line_moment(j, alpha);
                const double got = integrate(rule, [&](double t) { return std::pow(t, j); });
                CHECK(std::abs(got - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
            }
        }
    }
}

TEST_CASE("jacobi_rule with unequal exponents") {
    // int_{-1}^{1} (1-s)^a (1+s)^b ds = 2^{a+b+1} B(a+1, b+1)
    const double a = 1.5, b = 0.0;
    const Rule1D rule = jacobi_rule(6, a, b);
    const double total = integrate(rule, [](double) { return 1.0; });
    const double exact = std::pow(2.0, a + b + 1) * std::exp(std::lgamma(a + 1) + std::lgamma(b + 1) - std::lgamma(a + b + 2));
    CHECK(total == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("sphere_rule examples") {
    const SphereRule s1 = sphere_rule(1, 5);
    CHECK(s1.size() == 2);
    CHECK(s1.weights.sum() == doctest::Approx(2.0));

    const SphereRule s2 = sphere_rule(2, 8);
    CHECK(s2.size() >= 9);
    CHECK(integrate(s2, [](const auto&) { return 1.0; }) == doctest::Approx(2 * pi).epsilon(1e-14));
    CHECK(integrate(s2, [](const auto& x) { return x[0] * x[0]; }) == doctest::Approx(pi).epsilon(1e-14));

    const SphereRule s3 = sphere_rule(3, 4);
    CHECK(integrate(s3, [](const auto& x) { return x[2] * x[2]; }) == doctest::Approx(4 * pi / 3).epsilon(1e-13));
}

TEST_CASE("sphere_rule is exact on monomials up to its degree") {
    for (int d = 1; d <= 4; ++d) {
        for (int degree : {0, 3, 6, 10}) {
            const SphereRule rule = sphere_rule(d, degree);
            CHECK(rule.weights.sum() == doctest::Approx(sphere_surface_area(d)).epsilon(1e-10));
            for (Eigen::Index i = 0; i < rule.size(); ++i) CHECK(rule.nodes.col(i).norm() == doctest::Approx(1.0));
            std::vector<std::vector<int>> exps;
            std::vector<int> cur;
            oracle::all_exponents(d, degree, cur, exps);
            for (const auto& e : exps) {
                const double got = integrate(rule, [&](const auto& x) {
                    double v = 1.0;
                    for (int j = 0; j < d; ++j) v *= std::pow(x[j], e[j]);
                    return v;
                });
                CHECK(std::abs(got - oracle::sphere_monomial_integral(e)) <= 1e-12 * sphere_surface_area(d));
            }
        }
    }
}

TEST_CASE("ball_rule examples") {
    const BallRule b2 = ball_rule(2, 2);
    CHECK(integrate(b2, [](const auto&) { return 1.0; }) == doctest::Approx(pi).epsilon(1e-14));
    CHECK(integrate(b2, [](const auto& x) { return x[0] * x[0]; }) == doctest::Approx(pi / 4).epsilon(1e-14));
    const BallRule b1 = ball_rule(1, 3);
    CHECK(std::abs(integrate(b1, [](const auto& x) { return x[0] * x[0] * x[0]; })) < 1e-15);
}

TEST_CASE("ball_rule is exact for random polynomials") {
    std::mt19937_64 rng(3);
    for (int d = 1; d <= 3; ++d) {
        for (int degree : {2, 5, 9}) {
            const BallRule rule = ball_rule(d, degree);
            CHECK(rule.exact_degree == degree);
            CHECK(rule.weights.sum() == doctest::Approx(ball_volume(d)).epsilon(1e-10));
            for (int trial = 0; trial < 5; ++trial) {
                const oracle::Poly p = oracle::random_poly(d, degree, rng);
                CHECK(std::abs(integrate(rule, p) - p.ball_integral()) <= 1e-12 * (1.0 + p.coeff_sum()));
            }
        }
    }
}

TEST_CASE("lifted rule examples and cross-rule agreement") {
    CHECK(integrate(lift_ball_rule_from_sphere(1, 2), [](const auto&) { return 1.0; }) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(integrate(lift_ball_rule_from_sphere(2, 4), [](const auto&) { return 1.0; }) ==
          doctest::Approx(pi).epsilon(1e-14));
    std::mt19937_64 rng(5);
    for (int d = 1; d <= 3; ++d) {
        for (int degree = 0; degree <= 12; degree += 3) {
            const BallRule a = ball_rule(d, degree);
            const BallRule b = lift_ball_rule_from_sphere(d, degree);
            for (Eigen::Index i = 0; i < b.size(); ++i) CHECK(b.nodes.col(i).norm() <= 1.0 + 1e-12);
            for (int trial = 0; trial < 50; ++trial) {
                const oracle::Poly p = oracle::random_poly(d, degree, rng);
                const double va = integrate(a, p), vb = integrate(b, p);
                CHECK(std::abs(va - vb) <= 1e-9 * std::max(1.0, std::abs(va)));
            }
        }
    }
}

TEST_CASE("abs-last-coordinate weighted sphere rule") {
    // int_{S^2} |x_3| d omega = 2 pi ; int_{S^2} x_1^2 |x_3| d omega = pi / 2
    const SphereRule rule = abs_last_coordinate_sphere_rule(3, 6);
    CHECK(rule.weights.sum() == doctest::Approx(2 * pi).epsilon(1e-13));
    CHECK(integrate(rule, [](const auto& x) { return x[0] * x[0]; }) == doctest::Approx(pi / 2).epsilon(1e-13));
    CHECK_THROWS_AS(abs_last_coordinate_sphere_rule(1, 4), std::invalid_argument);
}

TEST_CASE("integrate reports non-finite integrands") {
    const BallRule rule = ball_rule(2, 2);
    CHECK_THROWS_AS(integrate(rule, [](const auto&) { return std::numeric_limits<double>::quiet_NaN(); }),
                    std::domain_error);
    CHECK_THROWS_AS(integrate(gauss_jacobi_rule(3, 0.0), [](double t) { return 1.0 / (t - t); }), std::domain_error);
}

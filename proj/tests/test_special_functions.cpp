#include "needlet_lq/quadrature.hpp"
#include "needlet_lq/special_functions.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

using namespace nlq;
using std::numbers::pi;

TEST_CASE("pochhammer examples") {
    CHECK(pochhammer(2.0, 3) == 24.0);
    CHECK(pochhammer(5.0, 0) == 1.0);
    CHECK(pochhammer(1.0, 4) == 24.0);
    CHECK(pochhammer(0.5, 2) == doctest::Approx(0.75));
}

TEST_CASE("gegenbauer examples") {
    CHECK(gegenbauer(1.0, 1, 0.5) == doctest::Approx(1.0));
    CHECK(std::abs(gegenbauer(1.0, 2, 0.5)) < 1e-15);
    CHECK(gegenbauer(1.5, 0, -0.3) == 1.0);
    CHECK_THROWS_AS(gegenbauer(0.0, 2, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(gegenbauer(1.0, -1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(gegenbauer(1.0, 2, 1.1), std::invalid_argument);
    // just outside [-1, 1] within the clamp tolerance
    CHECK(gegenbauer(1.0, 3, 1.0 + 5e-13) == doctest::Approx(gegenbauer(1.0, 3, 1.0)));
}

TEST_CASE("recurrence agrees with the generating-function series") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ut(-1.0, 1.0);
    for (double mu : {0.5, 1.0, 1.5, 2.5}) {
        for (int k = 0; k <= 8; ++k) {
            for (int i = 0; i < 50; ++i) {
                const double t = ut(rng);
                const auto [value, scale] = oracle::gegenbauer_series(mu, k, t);
                CHECK(std::abs(gegenbauer(mu, k, t) - value) <= 1e-10 * std::max(std::abs(value), scale * 1e-3));
            }
        }
    }
}

TEST_CASE("gegenbauer_all fills every degree") {
    std::vector<double> out(10);
    gegenbauer_all(1.5, 0.3, out);
    for (int k = 0; k < 10; ++k) CHECK(out[k] == doctest::Approx(gegenbauer(1.5, k, 0.3)).epsilon(1e-14));
}

TEST_CASE("gegenbauer_norm closed form and quadrature") {
    CHECK(gegenbauer_norm(0, 1.0) == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(gegenbauer_norm(0, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
    for (int d = 1; d <= 4; ++d) {
        const double mu = d / 2.0;
        for (int k = 0; k <= 10; ++k) {
            const double integral =
                oracle::weighted_line_integral(d, [&](double t) { return std::pow(gegenbauer(mu, k, t), 2); });
            CHECK(gegenbauer_norm(k, mu) == doctest::Approx(integral).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(gegenbauer_norm(100000, 200.0), std::overflow_error);
}

TEST_CASE("u_eval examples") {
    CHECK(u_eval(0, 2, 0.7) == doctest::Approx(std::sqrt(2.0 / pi)).epsilon(1e-14));
    CHECK(std::abs(u_eval(1, 1, 0.0)) < 1e-16);
}

TEST_CASE("U_k orthonormal against an independent weighted integral") {
    for (int d = 1; d <= 3; ++d) {
        for (int j = 0; j <= 12; ++j) {
            for (int k = 0; k <= 12; ++k) {
                const double ip =
                    oracle::weighted_line_integral(d, [&](double t) { return u_eval(j, d, t) * u_eval(k, d, t); });
                CHECK(std::abs(ip - (j == k ? 1.0 : 0.0)) <= 1e-9);
            }
        }
    }
}

TEST_CASE("v_coeff examples") {
    CHECK(v_coeff(0, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(v_coeff(0, 2) == doctest::Approx(std::sqrt(1.0 / (4 * pi))).epsilon(1e-14));
    CHECK(v_coeff(3, 2) == doctest::Approx(std::sqrt(4.0 / (4 * pi))).epsilon(1e-14));
    // d=3: (k+1)(k+2) / (2 (2 pi)^2)
    CHECK(v_coeff(2, 3) * v_coeff(2, 3) == doctest::Approx(12.0 / (8 * pi * pi)).epsilon(1e-14));
}

TEST_CASE("sphere area and ball volume") {
    CHECK(sphere_surface_area(1) == doctest::Approx(2.0));
    CHECK(sphere_surface_area(2) == doctest::Approx(2 * pi));
    CHECK(sphere_surface_area(3) == doctest::Approx(4 * pi));
    CHECK(ball_volume(1) == doctest::Approx(2.0));
    CHECK(ball_volume(2) == doctest::Approx(pi));
    CHECK(ball_volume(3) == doctest::Approx(4 * pi / 3));
}

TEST_CASE("addition kernel") {
    CHECK(addition_kernel_eval(0, 3, 0.42) == doctest::Approx(1.0 / (4 * pi)).epsilon(1e-14));
    CHECK(std::abs(addition_kernel_eval(1, 3, 0.0)) < 1e-16);
    CHECK_THROWS_AS(addition_kernel_eval(2, 2, 0.1), std::domain_error);
    // d=3: K_k^* = (2k+1)/(4 pi) P_k, the Legendre addition theorem
    const double t = 0.3;
    const double p3 = 0.5 * (5 * t * t * t - 3 * t);
    CHECK(addition_kernel_eval(3, 3, t) == doctest::Approx(7.0 / (4 * pi) * p3).epsilon(1e-13));
}

TEST_CASE("BasisConstants entries") {
    for (int d = 1; d <= 5; ++d) {
        const BasisConstants c(d, 64);
        for (int k = 0; k <= 64; ++k) {
            CHECK(std::isfinite(c.h(k)));
            CHECK(c.h(k) > 0.0);
            CHECK(c.v(k) > 0.0);
            CHECK(c.u_at_one(k) > 0.0);
            CHECK(c.v_squared(k) == doctest::Approx(pochhammer(k + 1.0, d - 1) / (2 * std::pow(2 * pi, d - 1)))
                                        .epsilon(1e-14));
            const double mu = d / 2.0;
            const double closed = std::sqrt(pi) * pochhammer(2 * mu, k) * std::tgamma(mu + 0.5) /
                                  ((k + mu) * std::tgamma(k + 1.0) * std::tgamma(mu));
            if (std::isfinite(closed)) CHECK(c.h(k) == doctest::Approx(closed).epsilon(1e-10));
        }
        std::vector<double> u(65);
        c.u_all(0.37, u);
        for (int k = 0; k <= 64; k += 7) CHECK(u[k] == doctest::Approx(u_eval(k, d, 0.37)).epsilon(1e-12));
    }
}

#include "needlet_lq/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlq {

namespace {

constexpr double kClampTolerance = 1e-12;

double clamp_argument(double t) {
    if (!(std::abs(t) <= 1.0 + kClampTolerance)) {
        throw std::invalid_argument("gegenbauer: argument " + std::to_string(t) +
                                    " outside [-1, 1]");
    }
    return std::clamp(t, -1.0, 1.0);
}

void check_dimension(int d) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
}

}  // namespace

double pochhammer(double a, int k) {
    if (k < 0) throw std::invalid_argument("pochhammer: k must be non-negative");
    double result = 1.0;
    for (int i = 0; i < k; ++i) result *= a + i;
    return result;
}

double gegenbauer(double mu, int k, double t) {
    if (!(mu > 0.0)) throw std::invalid_argument("gegenbauer: mu must be positive");
    if (k < 0) throw std::invalid_argument("gegenbauer: degree must be non-negative");
    t = clamp_argument(t);
    if (k == 0) return 1.0;
    double prev = 1.0;
    double curr = 2.0 * mu * t;
    for (int j = 2; j <= k; ++j) {
        const double next = (2.0 * (j + mu - 1.0) * t * curr - (j + 2.0 * mu - 2.0) * prev) / j;
        prev = curr;
        curr = next;
    }
    return curr;
}

void gegenbauer_all(double mu, double t, std::span<double> out) {
    if (!(mu > 0.0)) throw std::invalid_argument("gegenbauer: mu must be positive");
    if (out.empty()) return;
    t = clamp_argument(t);
    out[0] = 1.0;
    if (out.size() == 1) return;
    out[1] = 2.0 * mu * t;
    for (std::size_t j = 2; j < out.size(); ++j) {
        const double jd = static_cast<double>(j);
        out[j] = (2.0 * (jd + mu - 1.0) * t * out[j - 1] - (jd + 2.0 * mu - 2.0) * out[j - 2]) / jd;
    }
}

double gegenbauer_norm(int k, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("gegenbauer_norm: mu must be positive");
    if (k < 0) throw std::invalid_argument("gegenbauer_norm: degree must be non-negative");
    // log of pi^{1/2} (2mu)_k Gamma(mu+1/2) / ((k+mu) k! Gamma(mu))
    const double log_h = 0.5 * std::log(std::numbers::pi) + std::lgamma(2.0 * mu + k) -
                         std::lgamma(2.0 * mu) + std::lgamma(mu + 0.5) - std::log(k + mu) -
                         std::lgamma(k + 1.0) - std::lgamma(mu);
    const double h = std::exp(log_h);
    if (!std::isfinite(h) || h == 0.0) {
        throw std::overflow_error("gegenbauer_norm: h_{" + std::to_string(k) + "," +
                                  std::to_string(mu) + "} not representable (log h = " +
                                  std::to_string(log_h) + ")");
    }
    return h;
}

double u_eval(int k, int d, double t) {
    check_dimension(d);
    const double mu = 0.5 * d;
    return gegenbauer(mu, k, t) / std::sqrt(gegenbauer_norm(k, mu));
}

double v_coeff(int k, int d) {
    check_dimension(d);
    if (k < 0) throw std::invalid_argument("v_coeff: degree must be non-negative");
    const double num = pochhammer(k + 1.0, d - 1);
    const double den = 2.0 * std::pow(2.0 * std::numbers::pi, d - 1);
    return std::sqrt(num / den);
}

double sphere_surface_area(int d) {
    check_dimension(d);
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double ball_volume(int d) {
    if (d < 0) throw std::invalid_argument("ball_volume: dimension must be >= 0");
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double addition_kernel_eval(int k, int d, double t) {
    if (d < 3) {
        throw std::domain_error("addition_kernel_eval: requires d >= 3 (the factor 1/(d-2) "
                                "degenerates for d = " + std::to_string(d) + ")");
    }
    return (2.0 * k + d - 2.0) / ((d - 2.0) * sphere_surface_area(d)) *
           gegenbauer(0.5 * (d - 2), k, t);
}

BasisConstants::BasisConstants(int d, int max_degree) : d_(d), max_degree_(max_degree) {
    check_dimension(d);
    if (max_degree < 0) throw std::invalid_argument("BasisConstants: max_degree must be >= 0");
    const double mu = 0.5 * d;
    const auto count = static_cast<std::size_t>(max_degree) + 1;
    h_.resize(count);
    inv_sqrt_h_.resize(count);
    v_.resize(count);
    u_at_one_.resize(count);
    std::vector<double> g_at_one(count);
    gegenbauer_all(mu, 1.0, g_at_one);
    for (std::size_t k = 0; k < count; ++k) {
        const int ki = static_cast<int>(k);
        h_[k] = gegenbauer_norm(ki, mu);
        inv_sqrt_h_[k] = 1.0 / std::sqrt(h_[k]);
        v_[k] = v_coeff(ki, d);
        u_at_one_[k] = g_at_one[k] * inv_sqrt_h_[k];
    }
}

void BasisConstants::u_all(double t, std::span<double> out) const {
    if (out.size() > inv_sqrt_h_.size()) {
        throw std::out_of_range("BasisConstants::u_all: degree exceeds max_degree");
    }
    gegenbauer_all(0.5 * d_, t, out);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= inv_sqrt_h_[k];
}

}  // namespace nlq

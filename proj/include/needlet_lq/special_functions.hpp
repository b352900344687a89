#ifndef NEEDLET_LQ_SPECIAL_FUNCTIONS_HPP
#define NEEDLET_LQ_SPECIAL_FUNCTIONS_HPP

#include <span>
#include <vector>

namespace nlq {

/// Rising factorial (a)_k = a(a+1)...(a+k-1), with (a)_0 = 1.
double pochhammer(double a, int k);

/// Gegenbauer polynomial G_k^mu(t) by the three-term recurrence.
///
/// Arguments with |t| <= 1 + 1e-12 are clamped to [-1, 1]; anything further
/// out is rejected. Throws std::invalid_argument for mu <= 0 or k < 0.
double gegenbauer(double mu, int k, double t);

/// Fills out[k] = G_k^mu(t) for k = 0 .. out.size()-1 in one recurrence pass.
void gegenbauer_all(double mu, double t, std::span<double> out);

/// L2 weight h_{k,mu} = int G_k^mu(t)^2 (1-t^2)^{mu-1/2} dt.
///
/// Evaluated through log-Gamma; throws std::overflow_error if the result is
/// not representable.
double gegenbauer_norm(int k, double mu);

/// Orthonormal U_k(t) = h_{k,d/2}^{-1/2} G_k^{d/2}(t) for the weight
/// (1-t^2)^{(d-1)/2}.
double u_eval(int k, int d, double t);

/// v_k = ((k+1)_{d-1} / (2 (2 pi)^{d-1}))^{1/2}.
double v_coeff(int k, int d);

/// Surface measure of S^{d-1}: 2 pi^{d/2} / Gamma(d/2). S^0 has measure 2.
double sphere_surface_area(int d);

/// Lebesgue volume of the unit ball B^d (B^0 is a point of volume 1).
double ball_volume(int d);

/// Zonal addition-formula kernel
/// K_k^*(t) = (2k+d-2) / ((d-2) Omega_{d-1}) * G_k^{(d-2)/2}(t).
///
/// Only defined for d >= 3; throws std::domain_error otherwise.
double addition_kernel_eval(int k, int d, double t);

/// Per-degree normalisations for a fixed ambient dimension d.
class BasisConstants {
public:
    BasisConstants(int d, int max_degree);

    int dimension() const { return d_; }
    int max_degree() const { return max_degree_; }

    double h(int k) const { return h_.at(k); }
    double v(int k) const { return v_.at(k); }
    double v_squared(int k) const { return v_.at(k) * v_.at(k); }
    double u_at_one(int k) const { return u_at_one_.at(k); }

    std::span<const double> h() const { return h_; }
    std::span<const double> v() const { return v_; }
    std::span<const double> u_at_one() const { return u_at_one_; }

    /// Writes U_0(t) .. U_{out.size()-1}(t); out.size() must not exceed
    /// max_degree + 1.
    void u_all(double t, std::span<double> out) const;

private:
    int d_;
    int max_degree_;
    std::vector<double> h_;
    std::vector<double> inv_sqrt_h_;
    std::vector<double> v_;
    std::vector<double> u_at_one_;
};

}  // namespace nlq

#endif  // NEEDLET_LQ_SPECIAL_FUNCTIONS_HPP

#ifndef NEEDLET_LQ_NEEDLET_KERNEL_HPP
#define NEEDLET_LQ_NEEDLET_KERNEL_HPP

#include "needlet_lq/kernel.hpp"
#include "needlet_lq/quadrature.hpp"
#include "needlet_lq/special_functions.hpp"

#include <span>
#include <vector>

namespace nlq {

/// Smooth cutoff: 1 on [0, 1], 0 on [2, inf), and on (1, 2) the partition
/// rho(2-t) / (rho(2-t) + rho(t-1)) with rho(s) = exp(-1/s).
double eta_eval(double t);

class AdmissibleCutoff {
public:
    double operator()(double t) const { return eta_eval(t); }
    static constexpr double transition_begin = 1.0;
    static constexpr double transition_end = 2.0;
};

/// Kernels of the form
///   sum_k c_k int_{S^{d-1}} U_k(x.xi) U_k(y.xi) d omega(xi)
/// on the closed unit ball, with c_k >= 0.
///
/// The sphere integral is carried out with a product rule exact to twice the
/// top degree, so every value is free of quadrature error. The kernel is the
/// inner product of finite feature vectors sqrt(c_k w_j) U_k(x.xi_j), which
/// makes every Gram matrix symmetric and positive semidefinite.
class ZonalBallKernel : public Kernel {
public:
    ZonalBallKernel(int d, std::vector<double> coeffs, int sphere_degree);

    int dimension() const override { return d_; }
    std::string name() const override { return "zonal"; }
    double operator()(const ConstPointRef& x, const ConstPointRef& y) const override;
    Eigen::MatrixXd cross(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const override;
    Eigen::MatrixXd gram(const Eigen::MatrixXd& points) const override;

    /// Feature vector phi(x) with K(x, y) = phi(x) . phi(y).
    Eigen::VectorXd features(const ConstPointRef& x) const;
    /// Feature matrix, one column per point.
    Eigen::MatrixXd feature_matrix(const Eigen::MatrixXd& points) const;

    /// int_{S^{d-1}} U_k(x.xi) U_k(y.xi) d omega(xi) by the cached rule.
    double mode_integral(int k, const ConstPointRef& x, const ConstPointRef& y) const;

    std::span<const double> coeffs() const { return coeffs_; }
    const SphereRule& sphere() const { return sphere_; }
    const BasisConstants& constants() const { return constants_; }
    int top_degree() const { return static_cast<int>(coeffs_.size()) - 1; }

protected:
    void check_point(const ConstPointRef& x) const;

private:
    int d_;
    std::vector<double> coeffs_;
    BasisConstants constants_;
    SphereRule sphere_;
    std::vector<int> active_degrees_;
    std::vector<double> sqrt_coeffs_;
};

/// Needlet kernel L_{2n}: coefficients eta(k/n) v_k^2, truncated at k = 2n-1
/// where the cutoff vanishes. Sphere rule exact to degree 4n.
class NeedletKernel : public ZonalBallKernel {
public:
    NeedletKernel(int d, int n);
    std::string name() const override { return "needlet"; }
    int n() const { return n_; }

private:
    int n_;
};

/// Reproducing kernel K_n of P_n in L^2(B^d): coefficients v_k^2 for k <= n.
class ReproducingKernel : public ZonalBallKernel {
public:
    ReproducingKernel(int d, int n);
    std::string name() const override { return "reproducing"; }
    int n() const { return n_; }

private:
    int n_;
};

/// (L f)(x) = int_{B^d} K(x, y) f(y) dy by the given ball rule, evaluated at
/// every column of xs. f_at_nodes holds f at the rule's nodes.
Eigen::VectorXd apply_operator(const ZonalBallKernel& kernel, const Eigen::VectorXd& f_at_nodes,
                               const BallRule& ball, const Eigen::MatrixXd& xs);

template <class F>
double apply_operator(const ZonalBallKernel& kernel, F&& f, const ConstPointRef& x, const BallRule& ball) {
    Eigen::VectorXd values(ball.size());
    for (Eigen::Index i = 0; i < ball.size(); ++i) values[i] = f(ball.nodes.col(i));
    return apply_operator(kernel, values, ball, Eigen::MatrixXd(x))[0];
}

/// Metric on the ball: arccos(x.y + sqrt(1-|x|^2) sqrt(1-|y|^2)).
double ball_distance(const ConstPointRef& x, const ConstPointRef& y);

/// |L(x,y)| (sqrt(1-|x|^2) + 1/n)(sqrt(1-|y|^2) + 1/n)(1 + n rho(x,y))^l / n^d.
double localization_profile(const NeedletKernel& kernel, const ConstPointRef& x, const ConstPointRef& y,
                            int l);

}  // namespace nlq

#endif  // NEEDLET_LQ_NEEDLET_KERNEL_HPP

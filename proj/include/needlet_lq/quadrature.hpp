#ifndef NEEDLET_LQ_QUADRATURE_HPP
#define NEEDLET_LQ_QUADRATURE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlq {

/// Gauss rule on [-1, 1] for the Jacobi weight (1-t)^alpha (1+t)^beta.
/// Symmetric Gegenbauer-type rules have alpha == beta.
struct Rule1D {
    std::vector<double> nodes;    // strictly increasing, inside (-1, 1)
    std::vector<double> weights;  // positive
    double alpha = 0.0;
    double beta = 0.0;
    int exact_degree = 0;

    double weight_exponent() const { return alpha; }
};

/// Point-set rule on a sphere or ball. Nodes are stored one per column.
struct PointRule {
    int d = 0;
    Eigen::MatrixXd nodes;  // d x N
    Eigen::VectorXd weights;
    int exact_degree = 0;

    Eigen::Index size() const { return weights.size(); }
};

/// Rule on S^{d-1} in R^d for the surface measure.
struct SphereRule : PointRule {};

/// Rule on the closed unit ball B^d for Lebesgue measure.
struct BallRule : PointRule {};

/// Golub-Welsch rule for (1-t)^alpha (1+t)^beta, exact to degree 2*npoints-1.
Rule1D jacobi_rule(int npoints, double alpha, double beta);

/// Symmetric rule for (1-t^2)^alpha.
Rule1D gauss_jacobi_rule(int npoints, double alpha);

/// Product rule on S^{d-1}: the two antipodes for d = 1, equally spaced
/// angles for d = 2, and for d >= 3 a polar Gauss-Jacobi rule crossed with
/// the rule on S^{d-2}.
SphereRule sphere_rule(int d, int degree);

/// Rule on S^{d-1} for the weighted measure |xi_d| d omega(xi). Nodes come in
/// pairs symmetric in the last coordinate.
SphereRule abs_last_coordinate_sphere_rule(int d, int degree);

/// Radial Gauss rule for int_0^1 r^{d-1} (.) dr crossed with sphere_rule(d).
BallRule ball_rule(int d, int degree);

/// Ball rule obtained by projecting a |xi_{d+1}|-weighted rule on S^d onto
/// its first d coordinates and halving the weights.
BallRule lift_ball_rule_from_sphere(int d, int degree);

template <class F>
double integrate(const Rule1D& rule, F&& f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double value = f(rule.nodes[i]);
        if (!std::isfinite(value)) {
            throw std::domain_error("integrate: non-finite integrand at node " + std::to_string(i) +
                                    " (t = " + std::to_string(rule.nodes[i]) + ")");
        }
        sum += rule.weights[i] * value;
    }
    return sum;
}

/// Sum of weight_i * f(node_i); f receives each node as a column vector.
template <class F>
double integrate(const PointRule& rule, F&& f) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < rule.size(); ++i) {
        const double value = f(rule.nodes.col(i));
        if (!std::isfinite(value)) {
            throw std::domain_error("integrate: non-finite integrand at node " + std::to_string(i));
        }
        sum += rule.weights[i] * value;
    }
    return sum;
}

}  // namespace nlq

#endif  // NEEDLET_LQ_QUADRATURE_HPP

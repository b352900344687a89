#include "needlet_lq/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>

namespace nlq {

namespace {

// Recurrence coefficients of the monic Jacobi polynomials.
void jacobi_recurrence(int n, double a, double b, Eigen::VectorXd& diag, Eigen::VectorXd& sub) {
    diag.resize(n);
    sub.resize(std::max(n - 1, 0));
    const double ab = a + b;
    for (int k = 0; k < n; ++k) {
        if (k == 0) {
            diag[k] = (b - a) / (ab + 2.0);
        } else {
            const double s = 2.0 * k + ab;
            diag[k] = (b * b - a * a) / (s * (s + 2.0));
        }
    }
    for (int k = 1; k < n; ++k) {
        double beta_k;
        if (k == 1) {
            // (1+a+b) cancels analytically; keeps a+b = -1 well defined.
            beta_k = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            const double s = 2.0 * k + ab;
            beta_k = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        }
        sub[k - 1] = std::sqrt(beta_k);
    }
}

PointRule cross_sphere(const std::vector<double>& polar_nodes, const std::vector<double>& polar_weights,
                       const SphereRule& sub) {
    const int d = sub.d + 1;
    const Eigen::Index count = static_cast<Eigen::Index>(polar_nodes.size()) * sub.size();
    PointRule out;
    out.d = d;
    out.nodes.resize(d, count);
    out.weights.resize(count);
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < polar_nodes.size(); ++i) {
        const double t = polar_nodes[i];
        const double radius = std::sqrt(std::max(0.0, 1.0 - t * t));
        for (Eigen::Index j = 0; j < sub.size(); ++j) {
            out.nodes.col(col).head(d - 1) = radius * sub.nodes.col(j);
            out.nodes(d - 1, col) = t;
            out.weights[col] = polar_weights[i] * sub.weights[j];
            ++col;
        }
    }
    return out;
}

void check_rule_args(int d, int degree) {
    if (d < 1) throw std::invalid_argument("quadrature: dimension must be >= 1");
    if (degree < 0) throw std::invalid_argument("quadrature: degree must be >= 0");
}

}  // namespace

Rule1D jacobi_rule(int npoints, double alpha, double beta) {
    if (npoints < 1) throw std::invalid_argument("jacobi_rule: npoints must be >= 1");
    if (!(alpha > -1.0) || !(beta > -1.0)) {
        throw std::invalid_argument("jacobi_rule: exponents must exceed -1");
    }
    Eigen::VectorXd diag, sub;
    jacobi_recurrence(npoints, alpha, beta, diag, sub);

    const double log_mu0 = (alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                           std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0);
    const double mu0 = std::exp(log_mu0);

    Rule1D rule;
    rule.alpha = alpha;
    rule.beta = beta;
    rule.exact_degree = 2 * npoints - 1;
    rule.nodes.resize(npoints);
    rule.weights.resize(npoints);
    if (npoints == 1) {
        rule.nodes[0] = diag[0];
        rule.weights[0] = mu0;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd& eigenvalues = solver.eigenvalues();  // ascending
    const Eigen::MatrixXd& vectors = solver.eigenvectors();
    for (int i = 0; i < npoints; ++i) {
        rule.nodes[i] = eigenvalues[i];
        rule.weights[i] = mu0 * vectors(0, i) * vectors(0, i);
    }
    return rule;
}

Rule1D gauss_jacobi_rule(int npoints, double alpha) { return jacobi_rule(npoints, alpha, alpha); }

SphereRule sphere_rule(int d, int degree) {
    check_rule_args(d, degree);
    SphereRule rule;
    rule.d = d;
    if (d == 1) {
        rule.nodes.resize(1, 2);
        rule.nodes << -1.0, 1.0;
        rule.weights = Eigen::Vector2d(1.0, 1.0);
        rule.exact_degree = degree;
        return rule;
    }
    if (d == 2) {
        const int count = degree + 1;
        rule.nodes.resize(2, count);
        rule.weights = Eigen::VectorXd::Constant(count, 2.0 * std::numbers::pi / count);
        for (int i = 0; i < count; ++i) {
            const double angle = 2.0 * std::numbers::pi * i / count;
            rule.nodes(0, i) = std::cos(angle);
            rule.nodes(1, i) = std::sin(angle);
        }
        rule.exact_degree = count - 1;
        return rule;
    }
    const Rule1D polar = gauss_jacobi_rule(degree / 2 + 1, 0.5 * (d - 3));
    static_cast<PointRule&>(rule) = cross_sphere(polar.nodes, polar.weights, sphere_rule(d - 1, degree));
    rule.exact_degree = degree;
    return rule;
}

SphereRule abs_last_coordinate_sphere_rule(int d, int degree) {
    check_rule_args(d, degree);
    if (d < 2) throw std::invalid_argument("abs_last_coordinate_sphere_rule: requires d >= 2");
    // Fold t -> -t and substitute s = t^2: the even part of the t-integrand is
    // a polynomial in s against (1-s)^beta on [0, 1].
    const double beta = 0.5 * (d - 3);
    const Rule1D s_rule = jacobi_rule((degree / 2) / 2 + 1, beta, 0.0);
    const double scale = std::pow(0.5, beta + 2.0);
    std::vector<double> polar_nodes;
    std::vector<double> polar_weights;
    for (std::size_t j = 0; j < s_rule.nodes.size(); ++j) {
        const double t = std::sqrt(0.5 * (s_rule.nodes[j] + 1.0));
        polar_nodes.push_back(-t);
        polar_weights.push_back(scale * s_rule.weights[j]);
        polar_nodes.push_back(t);
        polar_weights.push_back(scale * s_rule.weights[j]);
    }
    SphereRule rule;
    static_cast<PointRule&>(rule) = cross_sphere(polar_nodes, polar_weights, sphere_rule(d - 1, degree));
    rule.exact_degree = degree;
    return rule;
}

BallRule ball_rule(int d, int degree) {
    check_rule_args(d, degree);
    // r = (s+1)/2 maps int_0^1 r^{d-1} g dr to 2^{-d} int (1+s)^{d-1} g ds.
    const Rule1D radial = jacobi_rule(degree / 2 + 1, 0.0, d - 1.0);
    const double jacobian = std::pow(0.5, d);
    const SphereRule sphere = sphere_rule(d, degree);
    BallRule rule;
    rule.d = d;
    rule.exact_degree = degree;
    const Eigen::Index count = static_cast<Eigen::Index>(radial.nodes.size()) * sphere.size();
    rule.nodes.resize(d, count);
    rule.weights.resize(count);
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double r = 0.5 * (radial.nodes[i] + 1.0);
        for (Eigen::Index j = 0; j < sphere.size(); ++j) {
            rule.nodes.col(col) = r * sphere.nodes.col(j);
            rule.weights[col] = jacobian * radial.weights[i] * sphere.weights[j];
            ++col;
        }
    }
    return rule;
}

BallRule lift_ball_rule_from_sphere(int d, int degree) {
    check_rule_args(d, degree);
    const SphereRule sphere = abs_last_coordinate_sphere_rule(d + 1, degree);
    BallRule rule;
    rule.d = d;
    rule.exact_degree = degree;
    rule.nodes = sphere.nodes.topRows(d);
    rule.weights = 0.5 * sphere.weights;
    return rule;
}

}  // namespace nlq

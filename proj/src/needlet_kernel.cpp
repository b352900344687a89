#include "needlet_lq/needlet_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nlq {

namespace {

constexpr double kBallTolerance = 1e-12;

double smooth_step_factor(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

std::vector<double> needlet_coeffs(int d, int n) {
    if (n < 1) throw std::invalid_argument("NeedletKernel: n must be >= 1");
    // eta(k/n) = 0 for k >= 2n.
    std::vector<double> coeffs(static_cast<std::size_t>(2 * n));
    for (int k = 0; k < 2 * n; ++k) {
        const double v = v_coeff(k, d);
        coeffs[k] = eta_eval(static_cast<double>(k) / n) * v * v;
    }
    return coeffs;
}

std::vector<double> reproducing_coeffs(int d, int n) {
    if (n < 0) throw std::invalid_argument("ReproducingKernel: n must be >= 0");
    std::vector<double> coeffs(static_cast<std::size_t>(n + 1));
    for (int k = 0; k <= n; ++k) {
        const double v = v_coeff(k, d);
        coeffs[k] = v * v;
    }
    return coeffs;
}

}  // namespace

double eta_eval(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("eta_eval: argument must be non-negative");
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    const double left = smooth_step_factor(2.0 - t);
    const double right = smooth_step_factor(t - 1.0);
    return left / (left + right);
}

ZonalBallKernel::ZonalBallKernel(int d, std::vector<double> coeffs, int sphere_degree)
    : d_(d),
      coeffs_(std::move(coeffs)),
      constants_(d, std::max<int>(static_cast<int>(coeffs_.size()) - 1, 0)),
      sphere_(sphere_rule(d, sphere_degree)) {
    if (coeffs_.empty()) throw std::invalid_argument("ZonalBallKernel: no coefficients");
    if (sphere_degree < 2 * top_degree()) {
        throw std::invalid_argument("ZonalBallKernel: sphere rule degree " + std::to_string(sphere_degree) +
                                    " below 2 * top degree " + std::to_string(2 * top_degree()));
    }
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] < 0.0) throw std::invalid_argument("ZonalBallKernel: negative coefficient");
        if (coeffs_[k] > 0.0) {
            active_degrees_.push_back(static_cast<int>(k));
            sqrt_coeffs_.push_back(std::sqrt(coeffs_[k]));
        }
    }
}

void ZonalBallKernel::check_point(const ConstPointRef& x) const {
    if (x.size() != d_) {
        throw std::invalid_argument("kernel: point has dimension " + std::to_string(x.size()) +
                                    ", expected " + std::to_string(d_));
    }
    const double norm = x.norm();
    if (!(norm <= 1.0 + kBallTolerance)) {
        throw std::domain_error("kernel: point outside the closed unit ball (|x| = " + std::to_string(norm) +
                                ")");
    }
}

Eigen::VectorXd ZonalBallKernel::features(const ConstPointRef& x) const {
    check_point(x);
    const Eigen::Index nodes = sphere_.size();
    const auto degrees = static_cast<Eigen::Index>(active_degrees_.size());
    Eigen::VectorXd phi(nodes * degrees);
    std::vector<double> u(coeffs_.size());
    for (Eigen::Index j = 0; j < nodes; ++j) {
        const double t = std::clamp(x.dot(sphere_.nodes.col(j)), -1.0, 1.0);
        constants_.u_all(t, u);
        const double sqrt_w = std::sqrt(sphere_.weights[j]);
        for (Eigen::Index a = 0; a < degrees; ++a) {
            phi[a * nodes + j] = sqrt_coeffs_[a] * sqrt_w * u[active_degrees_[a]];
        }
    }
    return phi;
}

Eigen::MatrixXd ZonalBallKernel::feature_matrix(const Eigen::MatrixXd& points) const {
    Eigen::MatrixXd out(sphere_.size() * static_cast<Eigen::Index>(active_degrees_.size()), points.cols());
    for (Eigen::Index i = 0; i < points.cols(); ++i) out.col(i) = features(points.col(i));
    return out;
}

double ZonalBallKernel::operator()(const ConstPointRef& x, const ConstPointRef& y) const {
    return features(x).dot(features(y));
}

Eigen::MatrixXd ZonalBallKernel::cross(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const {
    return feature_matrix(a).transpose() * feature_matrix(b);
}

Eigen::MatrixXd ZonalBallKernel::gram(const Eigen::MatrixXd& points) const {
    const Eigen::MatrixXd phi = feature_matrix(points);
    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(points.cols(), points.cols());
    lower.selfadjointView<Eigen::Lower>().rankUpdate(phi.transpose());
    // Mirror the lower triangle so G(i,j) and G(j,i) are bitwise equal.
    return lower.selfadjointView<Eigen::Lower>();
}

double ZonalBallKernel::mode_integral(int k, const ConstPointRef& x, const ConstPointRef& y) const {
    check_point(x);
    check_point(y);
    if (k < 0 || k > constants_.max_degree()) throw std::out_of_range("mode_integral: degree out of range");
    return integrate(sphere_, [&](const auto& xi) {
        const double tx = std::clamp(x.dot(xi), -1.0, 1.0);
        const double ty = std::clamp(y.dot(xi), -1.0, 1.0);
        return u_eval(k, d_, tx) * u_eval(k, d_, ty);
    });
}

NeedletKernel::NeedletKernel(int d, int n) : ZonalBallKernel(d, needlet_coeffs(d, n), 4 * n), n_(n) {}

ReproducingKernel::ReproducingKernel(int d, int n)
    : ZonalBallKernel(d, reproducing_coeffs(d, n), std::max(2 * n, 0)), n_(n) {}

Eigen::VectorXd apply_operator(const ZonalBallKernel& kernel, const Eigen::VectorXd& f_at_nodes,
                               const BallRule& ball, const Eigen::MatrixXd& xs) {
    if (f_at_nodes.size() != ball.size()) {
        throw std::invalid_argument("apply_operator: expected one function value per ball node");
    }
    if (!f_at_nodes.allFinite()) throw std::domain_error("apply_operator: non-finite function value");
    const Eigen::VectorXd weighted = ball.weights.cwiseProduct(f_at_nodes);
    // (L f)(x) = phi(x) . sum_j w_j f(y_j) phi(y_j)
    const Eigen::VectorXd moment = kernel.feature_matrix(ball.nodes) * weighted;
    return kernel.feature_matrix(xs).transpose() * moment;
}

double ball_distance(const ConstPointRef& x, const ConstPointRef& y) {
    const double cx = std::sqrt(std::max(0.0, 1.0 - x.squaredNorm()));
    const double cy = std::sqrt(std::max(0.0, 1.0 - y.squaredNorm()));
    return std::acos(std::clamp(x.dot(y) + cx * cy, -1.0, 1.0));
}

double localization_profile(const NeedletKernel& kernel, const ConstPointRef& x, const ConstPointRef& y,
                            int l) {
    if (l < 1) throw std::invalid_argument("localization_profile: l must be >= 1");
    const double n = kernel.n();
    const double value = std::abs(kernel(x, y));
    const double wx = std::sqrt(std::max(0.0, 1.0 - x.squaredNorm())) + 1.0 / n;
    const double wy = std::sqrt(std::max(0.0, 1.0 - y.squaredNorm())) + 1.0 / n;
    return value * wx * wy * std::pow(1.0 + n * ball_distance(x, y), l) / std::pow(n, kernel.dimension());
}

}  // namespace nlq

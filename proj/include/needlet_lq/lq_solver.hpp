#ifndef NEEDLET_LQ_LQ_SOLVER_HPP
#define NEEDLET_LQ_LQ_SOLVER_HPP

#include "needlet_lq/kernel.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nlq {

/// Coefficient-based l^q regularised least squares over the span of kernel
/// sections at the sample points:
///
///   min_a (1/m) sum_j (sum_i a_i K(x_i, x_j) - y_j)^2 + lambda sum_i |a_i|^q
///
/// The Gram matrix is shared between problems that differ only in
/// (lambda, q), so sweeps pay for it once.
class LqProblem {
public:
    LqProblem(Eigen::MatrixXd points, Eigen::VectorXd targets, std::shared_ptr<const Kernel> kernel,
              double lambda, double q, double M);
    LqProblem(Eigen::MatrixXd points, Eigen::VectorXd targets, std::shared_ptr<const Kernel> kernel,
              std::shared_ptr<const Eigen::MatrixXd> gram, double lambda, double q, double M);

    /// Same data and Gram matrix, different regularisation.
    LqProblem with_regularization(double lambda, double q) const;

    Eigen::Index size() const { return targets_.size(); }
    const Eigen::MatrixXd& points() const { return *points_; }
    const Eigen::VectorXd& targets() const { return targets_; }
    const Kernel& kernel() const { return *kernel_; }
    const Eigen::MatrixXd& gram() const { return *gram_; }
    double lambda() const { return lambda_; }
    double q() const { return q_; }
    /// Target bound after any upward adjustment.
    double M() const { return M_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    void validate();

    std::shared_ptr<const Eigen::MatrixXd> points_;
    Eigen::VectorXd targets_;
    std::shared_ptr<const Kernel> kernel_;
    std::shared_ptr<const Eigen::MatrixXd> gram_;
    double lambda_ = 0.0;
    double q_ = 0.0;
    double M_ = 0.0;
    std::vector<std::string> warnings_;
};

enum class SolverId { ridge_closed_form, prox_grad, iterative_threshold };

std::string to_string(SolverId id);

struct FitResult {
    Eigen::VectorXd coeffs;
    std::vector<double> objective_trace;
    int iterations = 0;
    bool converged = false;
    SolverId solver_id = SolverId::prox_grad;
    /// Set for non-convex q: the result is a stationary point only.
    std::string note;
};

struct ProxGradOptions {
    int max_iter = 20000;
    /// Stop once max |delta a_i| < tol ...
    double tol = 1e-8;
    /// ... and the relative objective change is below this.
    double objective_tol = 1e-10;
    /// Fixed step; defaults to 1 / Lip with Lip = (2/m) sigma_max(G)^2.
    std::optional<double> step;
    bool backtracking = false;
    /// Monotone FISTA with function-value restart for convex q >= 1. Plain
    /// proximal gradient is used for q < 1 or when backtracking.
    bool accelerated = true;
    /// Starting coefficients; zero when empty.
    Eigen::VectorXd initial;
};

/// (1/m) ||G a - y||^2 + lambda sum |a_i|^q.
double objective(const LqProblem& problem, const Eigen::VectorXd& coeffs);

/// Global minimiser of (1/2)(u - a)^2 + tau |u|^q. Ties at the sparsity
/// threshold for q < 1 resolve to zero.
double prox_lq(double a, double tau, double q);

/// Closed form for q = 2: (G^T G + m lambda I) a = G^T y.
FitResult solve_ridge(const LqProblem& problem);

/// Proximal gradient from zero (or opts.initial). Global for q >= 1;
/// stationary point with objective <= objective(0) for q < 1.
FitResult solve_prox_grad(const LqProblem& problem, const ProxGradOptions& opts = {});

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power
/// iteration, relative tolerance tol.
double largest_eigenvalue(const Eigen::MatrixXd& symmetric, double tol = 1e-8, int max_iter = 10000);

/// Clamp to [-M, M].
double project_M(double value, double M);

/// sum_i a_i K(x_i, x), optionally clamped to [-M, M].
double predict(const FitResult& fit, const LqProblem& problem, const ConstPointRef& x, bool clamp);
Eigen::VectorXd predict_batch(const FitResult& fit, const LqProblem& problem, const Eigen::MatrixXd& xs, bool clamp);

/// lambda sum |a_i|^q <= (1/m) sum y_i^2 + 1e-10.
bool coefficient_bound_check(const FitResult& fit, const LqProblem& problem);

}  // namespace nlq

#endif  // NEEDLET_LQ_LQ_SOLVER_HPP

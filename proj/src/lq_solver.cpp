#include "needlet_lq/lq_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nlq {

namespace {

double penalty(const Eigen::VectorXd& a, double q) {
    if (q == 1.0) return a.lpNorm<1>();
    if (q == 2.0) return a.squaredNorm();
    double sum = 0.0;
    for (double v : a) sum += std::pow(std::abs(v), q);
    return sum;
}

// Root of an increasing function on [lo, hi] with g(lo) <= 0 <= g(hi):
// Newton steps, falling back to bisection when a step leaves the bracket.
template <class G, class DG>
double increasing_root(G&& g, DG&& dg, double lo, double hi) {
    double x = hi;
    for (int it = 0; it < 200; ++it) {
        const double gx = g(x);
        if (gx == 0.0) return x;
        if (gx < 0.0) lo = x; else hi = x;
        const double slope = dg(x);
        double next = (std::isfinite(slope) && slope > 0.0) ? x - gx / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)) ||
            hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) {
            return next;
        }
        x = next;
    }
    return x;
}

double scalar_objective(double u, double a, double tau, double q) {
    return 0.5 * (u - a) * (u - a) + tau * std::pow(std::abs(u), q);
}

double prox_positive(double a, double tau, double q) {
    // a > 0, tau > 0; the minimiser has the sign of a.
    if (q > 1.0) {
        auto g = [&](double u) { return u + q * tau * std::pow(u, q - 1.0) - a; };
        auto dg = [&](double u) { return 1.0 + q * (q - 1.0) * tau * std::pow(u, q - 2.0); };
        return increasing_root(g, dg, 0.0, a);
    }
    // 0 < q < 1: u + q tau u^{q-1} is convex on u > 0 with its minimum at
    // u_min; below that value there is no stationary point.
    const double u_min = std::pow(q * (1.0 - q) * tau, 1.0 / (2.0 - q));
    if (u_min + q * tau * std::pow(u_min, q - 1.0) > a) return 0.0;
    auto g = [&](double u) { return u + q * tau * std::pow(u, q - 1.0) - a; };
    auto dg = [&](double u) { return 1.0 - q * (1.0 - q) * tau * std::pow(u, q - 2.0); };
    const double u = increasing_root(g, dg, u_min, a);
    return scalar_objective(u, a, tau, q) < 0.5 * a * a ? u : 0.0;
}

struct Residual {
    Eigen::VectorXd r;  // G a - y
    double loss = 0.0;  // (1/m) |r|^2
};

Residual residual(const LqProblem& p, const Eigen::VectorXd& a) {
    Residual out;
    out.r = p.gram() * a - p.targets();
    out.loss = out.r.squaredNorm() / static_cast<double>(p.size());
    return out;
}

}  // namespace

LqProblem::LqProblem(Eigen::MatrixXd points, Eigen::VectorXd targets, std::shared_ptr<const Kernel> kernel,
                     double lambda, double q, double M) {
    if (!kernel) throw std::invalid_argument("LqProblem: null kernel");
    auto gram = std::make_shared<const Eigen::MatrixXd>(kernel->gram(points));
    *this = LqProblem(std::move(points), std::move(targets), std::move(kernel), std::move(gram), lambda, q, M);
}

LqProblem::LqProblem(Eigen::MatrixXd points, Eigen::VectorXd targets, std::shared_ptr<const Kernel> kernel,
                     std::shared_ptr<const Eigen::MatrixXd> gram, double lambda, double q, double M)
    : points_(std::make_shared<const Eigen::MatrixXd>(std::move(points))),
      targets_(std::move(targets)),
      kernel_(std::move(kernel)),
      gram_(std::move(gram)),
      lambda_(lambda),
      q_(q),
      M_(M) {
    validate();
}

void LqProblem::validate() {
    if (!kernel_) throw std::invalid_argument("LqProblem: null kernel");
    if (!gram_) throw std::invalid_argument("LqProblem: null Gram matrix");
    const Eigen::Index m = targets_.size();
    if (m < 1) throw std::invalid_argument("LqProblem: need at least one sample");
    if (points_->cols() != m) throw std::invalid_argument("LqProblem: points and targets differ in count");
    if (points_->rows() != kernel_->dimension()) {
        throw std::invalid_argument("LqProblem: point dimension does not match the kernel");
    }
    if (gram_->rows() != m || gram_->cols() != m) throw std::invalid_argument("LqProblem: Gram matrix shape");
    if (!(lambda_ > 0.0)) throw std::invalid_argument("LqProblem: lambda must be positive");
    if (!(q_ > 0.0)) throw std::invalid_argument("LqProblem: q must be positive");
    if (!(M_ > 0.0)) throw std::invalid_argument("LqProblem: M must be positive");
    const double largest = targets_.cwiseAbs().maxCoeff();
    if (largest > M_) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "targets exceed M = " << M_ << "; M raised to " << largest;
        warnings_.push_back(msg.str());
        M_ = largest;
    }
}

LqProblem LqProblem::with_regularization(double lambda, double q) const {
    LqProblem copy = *this;
    copy.lambda_ = lambda;
    copy.q_ = q;
    copy.warnings_.clear();
    copy.validate();
    return copy;
}

std::string to_string(SolverId id) {
    switch (id) {
        case SolverId::ridge_closed_form: return "ridge-closed-form";
        case SolverId::prox_grad: return "prox-grad";
        case SolverId::iterative_threshold: return "iterative-threshold";
    }
    return "unknown";
}

double objective(const LqProblem& problem, const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != problem.size()) throw std::invalid_argument("objective: coefficient count");
    return residual(problem, coeffs).loss + problem.lambda() * penalty(coeffs, problem.q());
}

double prox_lq(double a, double tau, double q) {
    if (!(tau >= 0.0)) throw std::invalid_argument("prox_lq: tau must be non-negative");
    if (!(q > 0.0)) throw std::invalid_argument("prox_lq: q must be positive");
    if (tau == 0.0 || a == 0.0) return a;
    if (q == 1.0) return std::copysign(std::max(std::abs(a) - tau, 0.0), a);
    if (q == 2.0) return a / (1.0 + 2.0 * tau);
    return std::copysign(prox_positive(std::abs(a), tau, q), a);
}

double largest_eigenvalue(const Eigen::MatrixXd& symmetric, double tol, int max_iter) {
    const Eigen::Index m = symmetric.rows();
    if (m == 0) return 0.0;
    Eigen::VectorXd v(m);
    for (Eigen::Index i = 0; i < m; ++i) v[i] = 1.0 + 0.25 * std::sin(1.0 + static_cast<double>(i));
    v.normalize();
    double estimate = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w = symmetric * v;
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        const double next = std::abs(v.dot(w));
        v = w / norm;
        if (std::abs(next - estimate) <= tol * next) return std::max(next, norm);
        estimate = next;
    }
    return estimate;
}

FitResult solve_ridge(const LqProblem& problem) {
    if (problem.q() != 2.0) throw std::invalid_argument("solve_ridge: requires q = 2");
    const Eigen::MatrixXd& g = problem.gram();
    const double m = static_cast<double>(problem.size());
    Eigen::MatrixXd system = g.transpose() * g;
    system.diagonal().array() += m * problem.lambda();
    Eigen::LLT<Eigen::MatrixXd> llt(system);
    if (llt.info() != Eigen::Success || llt.rcond() < 1e-15) {
        std::ostringstream msg;
        msg << "solve_ridge: normal equations near singular (rcond " << llt.rcond()
            << "); with m*lambda > 0 this indicates a broken kernel";
        throw std::runtime_error(msg.str());
    }
    FitResult fit;
    fit.coeffs = llt.solve(g.transpose() * problem.targets());
    fit.solver_id = SolverId::ridge_closed_form;
    fit.converged = true;
    fit.iterations = 1;
    fit.objective_trace = {objective(problem, Eigen::VectorXd::Zero(problem.size())), objective(problem, fit.coeffs)};
    return fit;
}

FitResult solve_prox_grad(const LqProblem& problem, const ProxGradOptions& opts) {
    const Eigen::Index size = problem.size();
    const double m = static_cast<double>(size);
    const double lambda = problem.lambda();
    const double q = problem.q();
    const Eigen::MatrixXd& g = problem.gram();

    FitResult fit;
    fit.solver_id = q < 1.0 ? SolverId::iterative_threshold : SolverId::prox_grad;
    if (q < 1.0) fit.note = "non-convex q: stationary point, global optimality not claimed";
    fit.coeffs = opts.initial.size() == 0 ? Eigen::VectorXd::Zero(size) : opts.initial;
    if (fit.coeffs.size() != size) throw std::invalid_argument("solve_prox_grad: initial coefficient count");

    double step = 0.0;
    if (opts.step) {
        step = *opts.step;
    } else {
        const double sigma = largest_eigenvalue(g, 1e-8);
        const double lipschitz = 2.0 / m * sigma * sigma;
        // Power iteration approaches sigma from below; pad so the step stays
        // within 1 / Lip.
        step = lipschitz > 0.0 ? 1.0 / (lipschitz * (1.0 + 1e-6)) : 1.0;
    }
    if (!(step > 0.0)) throw std::invalid_argument("solve_prox_grad: step must be positive");

    Residual current = residual(problem, fit.coeffs);
    double value = current.loss + lambda * penalty(fit.coeffs, q);
    fit.objective_trace.push_back(value);

    auto prox_step = [&](const Eigen::VectorXd& gradient, double t) {
        Eigen::VectorXd next(size);
        for (Eigen::Index i = 0; i < size; ++i) next[i] = prox_lq(fit.coeffs[i] - t * gradient[i], t * lambda, q);
        return next;
    };

    if (opts.accelerated && !opts.backtracking && q >= 1.0) {
        // Momentum is dropped whenever the extrapolated step fails to lower
        // the objective. A step from y == a is a plain proximal step, which
        // descends in exact arithmetic, so it is always accepted; otherwise
        // rounding at the optimum would stall the iteration.
        Eigen::VectorXd y = fit.coeffs;
        Eigen::VectorXd previous = fit.coeffs;
        Residual y_residual = current;
        double t = 1.0;
        bool plain = true;
        for (int it = 1; it <= opts.max_iter; ++it) {
            const Eigen::VectorXd gradient = (2.0 / m) * (g * y_residual.r);
            Eigen::VectorXd z(size);
            for (Eigen::Index i = 0; i < size; ++i) z[i] = prox_lq(y[i] - step * gradient[i], step * lambda, q);
            Residual z_residual = residual(problem, z);
            const double z_value = z_residual.loss + lambda * penalty(z, q);
            const double change = (z - y).cwiseAbs().maxCoeff();
            const double relative = std::abs(z_value - value) / std::max(std::abs(value), 1e-300);
            fit.iterations = it;
            if (plain || z_value <= value) {
                previous = std::move(fit.coeffs);
                fit.coeffs = std::move(z);
                current = std::move(z_residual);
                value = z_value;
                const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
                y = fit.coeffs + ((t - 1.0) / t_next) * (fit.coeffs - previous);
                y_residual = residual(problem, y);
                t = t_next;
                plain = false;
            } else {
                t = 1.0;
                y = fit.coeffs;
                y_residual = current;
                plain = true;
            }
            fit.objective_trace.push_back(value);
            if (change < opts.tol && relative < opts.objective_tol) {
                fit.converged = true;
                break;
            }
        }
        return fit;
    }

    for (int it = 1; it <= opts.max_iter; ++it) {
        const Eigen::VectorXd gradient = (2.0 / m) * (g * current.r);
        Eigen::VectorXd next = prox_step(gradient, step);
        Residual next_residual = residual(problem, next);
        if (opts.backtracking) {
            for (int shrink = 0; shrink < 60; ++shrink) {
                const Eigen::VectorXd delta = next - fit.coeffs;
                const double bound = current.loss + gradient.dot(delta) + delta.squaredNorm() / (2.0 * step);
                if (next_residual.loss <= bound) break;
                step *= 0.5;
                next = prox_step(gradient, step);
                next_residual = residual(problem, next);
            }
        }
        const double next_value = next_residual.loss + lambda * penalty(next, q);
        const double change = (next - fit.coeffs).cwiseAbs().maxCoeff();
        const double relative = std::abs(next_value - value) / std::max(std::abs(value), 1e-300);

        fit.coeffs = std::move(next);
        current = std::move(next_residual);
        value = next_value;
        fit.objective_trace.push_back(value);
        fit.iterations = it;
        if (change < opts.tol && relative < opts.objective_tol) {
            fit.converged = true;
            break;
        }
    }
    return fit;
}

double project_M(double value, double M) {
    if (!(M > 0.0)) throw std::invalid_argument("project_M: M must be positive");
    if (value > M) return M;
    if (value >= -M) return value;
    return -M;
}

double predict(const FitResult& fit, const LqProblem& problem, const ConstPointRef& x, bool clamp) {
    return predict_batch(fit, problem, Eigen::MatrixXd(x), clamp)[0];
}

Eigen::VectorXd predict_batch(const FitResult& fit, const LqProblem& problem, const Eigen::MatrixXd& xs, bool clamp) {
    if (fit.coeffs.size() != problem.size()) throw std::invalid_argument("predict: coefficient count");
    Eigen::VectorXd out = problem.kernel().cross(xs, problem.points()) * fit.coeffs;
    if (clamp) {
        for (double& v : out) v = project_M(v, problem.M());
    }
    return out;
}

bool coefficient_bound_check(const FitResult& fit, const LqProblem& problem) {
    const double lhs = problem.lambda() * penalty(fit.coeffs, problem.q());
    const double rhs = problem.targets().squaredNorm() / static_cast<double>(problem.size());
    return lhs <= rhs + 1e-10;
}

}  // namespace nlq

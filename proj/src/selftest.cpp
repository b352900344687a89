#include "needlet_lq/selftest.hpp"

#include "needlet_lq/cubature_mz.hpp"
#include "needlet_lq/experiments.hpp"
#include "needlet_lq/lq_solver.hpp"
#include "needlet_lq/needlet_kernel.hpp"
#include "needlet_lq/quadrature.hpp"
#include "needlet_lq/random.hpp"
#include "needlet_lq/special_functions.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nlq {

namespace {

CheckResult check_at_most(std::string module, std::string name, double measured, double threshold) {
    return {std::move(module), std::move(name), measured <= threshold, measured, threshold};
}

double orthonormality_error(int d, int max_degree) {
    const BasisConstants constants(d, max_degree);
    const Rule1D rule = gauss_jacobi_rule(max_degree + 1, 0.5 * (d - 1));
    std::vector<double> u(static_cast<std::size_t>(max_degree) + 1);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(max_degree + 1, max_degree + 1);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        constants.u_all(rule.nodes[i], u);
        const Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(u.size()));
        gram += rule.weights[i] * uv * uv.transpose();
    }
    return (gram - Eigen::MatrixXd::Identity(max_degree + 1, max_degree + 1)).cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<CheckResult> run_selftest(unsigned long long seed) {
    std::vector<CheckResult> out;
    Rng rng(mix_seed(seed, {0}));

    // special_functions
    {
        double worst = 0.0;
        for (int d = 1; d <= 3; ++d) worst = std::max(worst, orthonormality_error(d, 12));
        out.push_back(check_at_most("special_functions", "U_k orthonormality d<=3 k<=12", worst, 1e-9));
        double v_err = 0.0;
        for (int d = 1; d <= 5; ++d) {
            for (int k = 0; k <= 20; ++k) {
                const double expected = pochhammer(k + 1.0, d - 1) / (2.0 * std::pow(2.0 * std::numbers::pi, d - 1));
                v_err = std::max(v_err, std::abs(v_coeff(k, d) * v_coeff(k, d) - expected) / expected);
            }
        }
        out.push_back(check_at_most("special_functions", "v_k^2 closed form", v_err, 1e-14));
    }

    // quadrature
    {
        double worst = 0.0;
        for (int d = 1; d <= 3; ++d) {
            const BallRule a = ball_rule(d, 8);
            const BallRule b = lift_ball_rule_from_sphere(d, 8);
            const auto exps = graded_exponents(d, 8);
            const Eigen::VectorXd ma = evaluate_monomials(exps, a.nodes) * a.weights;
            const Eigen::VectorXd mb = evaluate_monomials(exps, b.nodes) * b.weights;
            worst = std::max(worst, (ma - mb).cwiseAbs().maxCoeff());
            worst = std::max(worst, std::abs(a.weights.sum() - ball_volume(d)) / ball_volume(d));
        }
        out.push_back(check_at_most("quadrature", "ball_rule vs sphere lift, degree 8", worst, 1e-12));
    }

    // needlet_kernel
    {
        const int d = 2, n = 4;
        const NeedletKernel kernel(d, n);
        const BallRule ball = ball_rule(d, 3 * n);
        const Eigen::MatrixXd xs = uniform_ball(d, 10, rng);
        auto poly = [](const auto& y) { return 1.0 + y[0] - 2.0 * y[0] * y[1] + std::pow(y[1], 4); };
        Eigen::VectorXd f(ball.size());
        for (Eigen::Index i = 0; i < ball.size(); ++i) f[i] = poly(ball.nodes.col(i));
        const Eigen::VectorXd lf = apply_operator(kernel, f, ball, xs);
        double err = 0.0;
        for (Eigen::Index i = 0; i < xs.cols(); ++i) err = std::max(err, std::abs(lf[i] - poly(xs.col(i))));
        out.push_back(check_at_most("needlet_kernel", "reproduces P_4, d=2", err, 1e-9));

        const Eigen::MatrixXd g = kernel.gram(uniform_ball(d, 25, rng));
        const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff();
        out.push_back(check_at_most("needlet_kernel", "Gram PSD (-min eig / max diag)",
                                    -min_eig / g.diagonal().maxCoeff(), 1e-8));
    }

    // lq_solver
    {
        double worst = 0.0;
        for (double q : {0.5, 2.0 / 3.0, 1.0, 1.5, 2.0, 4.0}) {
            for (double a : {-3.0, -0.4, 0.05, 1.7}) {
                const double tau = 0.6;
                const double u = prox_lq(a, tau, q);
                auto h = [&](double v) { return 0.5 * (v - a) * (v - a) + tau * std::pow(std::abs(v), q); };
                double grid_min = h(0.0);
                for (double v = -5.0; v <= 5.0; v += 1e-3) grid_min = std::min(grid_min, h(v));
                worst = std::max(worst, h(u) - grid_min);
            }
        }
        out.push_back(check_at_most("lq_solver", "prox beats grid", worst, 1e-12));

        DatasetSpec spec;
        spec.m_train = 30;
        spec.m_test = 10;
        spec.seed = seed;
        const Dataset data = gen_data(spec);
        const auto kernel = std::make_shared<const NeedletKernel>(1, 4);
        const LqProblem problem(data.train_x, data.train_y, kernel, 1e-2, 2.0, 2.0);
        const FitResult ridge = solve_ridge(problem);
        ProxGradOptions opts;
        opts.tol = 1e-13;
        opts.objective_tol = 1e-15;
        opts.max_iter = 200000;
        const FitResult pg = solve_prox_grad(problem, opts);
        out.push_back(check_at_most("lq_solver", "prox-grad(q=2) vs ridge (relative)",
                                    (pg.coeffs - ridge.coeffs).norm() / ridge.coeffs.norm(), 1e-6));
    }

    // cubature_mz
    {
        const Eigen::MatrixXd nodes = uniform_ball(2, 200, rng);
        const CubatureWitness w = min_norm_weights(nodes, 4, 2);
        out.push_back(check_at_most("cubature_mz", "min-norm witness residual, d=2 n=4 m=200", w.max_residual, 1e-8));
    }
    return out;
}

}  // namespace nlq

#include "needlet_lq/cubature_mz.hpp"

#include "needlet_lq/parallel.hpp"
#include "needlet_lq/quadrature.hpp"
#include "needlet_lq/random.hpp"
#include "needlet_lq/special_functions.hpp"
#include "needlet_lq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nlq {

namespace {

constexpr double kRankTolerance = 1e-10;

void compositions(int d, int total, std::vector<int>& current, std::vector<std::vector<int>>& out) {
    const auto index = static_cast<int>(current.size());
    if (index == d - 1) {
        current.push_back(total);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (int first = total; first >= 0; --first) {
        current.push_back(first);
        compositions(d, total - first, current, out);
        current.pop_back();
    }
}

struct MinNormSolution {
    Eigen::VectorXd weights;
    int rank = 0;
    double max_residual = 0.0;
};

MinNormSolution solve_min_norm(const Eigen::MatrixXd& system, const Eigen::VectorXd& rhs) {
    // Row scaling changes neither the feasible set nor its minimum-norm point.
    Eigen::VectorXd scale = system.rowwise().norm();
    for (double& s : scale) s = s > 0.0 ? 1.0 / s : 1.0;
    const Eigen::MatrixXd scaled = scale.asDiagonal() * system;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(scaled);
    cod.setThreshold(kRankTolerance);
    MinNormSolution out;
    out.rank = static_cast<int>(cod.rank());
    out.weights = cod.solve(scale.asDiagonal() * rhs);
    out.max_residual = (system * out.weights - rhs).cwiseAbs().maxCoeff();
    return out;
}

std::map<double, double> p_norms(const Eigen::VectorXd& weights, const std::vector<double>& p_list) {
    std::map<double, double> out;
    for (double p : p_list) out[p] = weights.array().abs().pow(p).sum();
    return out;
}

Eigen::VectorXd sphere_moments(int d, int n) {
    const auto exponents = sphere_exponents(d, n);
    const SphereRule rule = abs_last_coordinate_sphere_rule(d + 1, n);
    return evaluate_monomials(exponents, rule.nodes) * rule.weights;
}

int weighted_norm_degree(double p, int n) {
    const bool even_integer = p == std::floor(p) && static_cast<long>(p) % 2 == 0;
    return static_cast<int>(std::ceil(p * n)) + (even_integer ? 0 : 24);
}

}  // namespace

RankDeficientError::RankDeficientError(int rank, int required)
    : std::runtime_error("cubature: degenerate node set, numerical rank " + std::to_string(rank) + " < " +
                         std::to_string(required)),
      rank_(rank),
      required_(required) {}

std::vector<std::vector<int>> graded_exponents(int d, int n) {
    if (d < 1 || n < 0) throw std::invalid_argument("graded_exponents: need d >= 1 and n >= 0");
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    for (int total = 0; total <= n; ++total) compositions(d, total, current, out);
    return out;
}

std::vector<std::vector<int>> sphere_exponents(int d, int n) {
    if (d < 1 || n < 0) throw std::invalid_argument("sphere_exponents: need d >= 1 and n >= 0");
    std::vector<std::vector<int>> out;
    for (int e = 0; e <= std::min(n, 1); ++e) {
        for (auto beta : graded_exponents(d, n - e)) {
            beta.push_back(e);
            out.push_back(std::move(beta));
        }
    }
    return out;
}

Eigen::MatrixXd evaluate_monomials(const std::vector<std::vector<int>>& exponents, const Eigen::MatrixXd& points) {
    const auto rows = static_cast<Eigen::Index>(exponents.size());
    const Eigen::Index d = points.rows();
    int max_power = 0;
    for (const auto& e : exponents) {
        if (static_cast<Eigen::Index>(e.size()) != d) throw std::invalid_argument("evaluate_monomials: arity");
        for (int v : e) max_power = std::max(max_power, v);
    }
    Eigen::MatrixXd out(rows, points.cols());
    Eigen::MatrixXd powers(d, max_power + 1);
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
        for (Eigen::Index k = 0; k < d; ++k) {
            powers(k, 0) = 1.0;
            for (int j = 1; j <= max_power; ++j) powers(k, j) = powers(k, j - 1) * points(k, i);
        }
        for (Eigen::Index r = 0; r < rows; ++r) {
            double value = 1.0;
            for (Eigen::Index k = 0; k < d; ++k) value *= powers(k, exponents[r][k]);
            out(r, i) = value;
        }
    }
    return out;
}

Eigen::VectorXd ball_moments(int n, int d) {
    if (n < 0) throw std::invalid_argument("ball_moments: degree must be >= 0");
    const BallRule rule = ball_rule(d, n);
    return evaluate_monomials(graded_exponents(d, n), rule.nodes) * rule.weights;
}

int polynomial_space_dim(int d, int n) { return static_cast<int>(graded_exponents(d, n).size()); }

CubatureWitness min_norm_weights(const Eigen::MatrixXd& points, int n, int d, const std::vector<double>& p_list) {
    if (points.rows() != d) throw std::invalid_argument("min_norm_weights: point dimension mismatch");
    const auto exponents = graded_exponents(d, n);
    const int required = static_cast<int>(exponents.size());
    if (points.cols() < required) throw RankDeficientError(static_cast<int>(points.cols()), required);
    const MinNormSolution solution = solve_min_norm(evaluate_monomials(exponents, points), ball_moments(n, d));
    if (solution.rank < required) throw RankDeficientError(solution.rank, required);
    CubatureWitness witness;
    witness.points = points;
    witness.degree = n;
    witness.d = d;
    witness.weights = solution.weights;
    witness.max_residual = solution.max_residual;
    witness.rank = solution.rank;
    witness.weight_p_norms = p_norms(witness.weights, p_list);
    return witness;
}

CubatureWitness sphere_min_norm_weights(const Eigen::MatrixXd& sphere_points, int n,
                                        const std::vector<double>& p_list) {
    const int d = static_cast<int>(sphere_points.rows()) - 1;
    if (d < 1) throw std::invalid_argument("sphere_min_norm_weights: nodes must live in R^{d+1}, d >= 1");
    const auto exponents = sphere_exponents(d, n);
    const int required = static_cast<int>(exponents.size());
    if (sphere_points.cols() < required) throw RankDeficientError(static_cast<int>(sphere_points.cols()), required);
    const MinNormSolution solution = solve_min_norm(evaluate_monomials(exponents, sphere_points), sphere_moments(d, n));
    if (solution.rank < required) throw RankDeficientError(solution.rank, required);
    CubatureWitness witness;
    witness.points = sphere_points;
    witness.degree = n;
    witness.d = d + 1;
    witness.weights = solution.weights;
    witness.max_residual = solution.max_residual;
    witness.rank = solution.rank;
    witness.weight_p_norms = p_norms(witness.weights, p_list);
    return witness;
}

CubatureWitness lift_witness_to_ball(const CubatureWitness& sphere_witness) {
    const int d = sphere_witness.d - 1;
    CubatureWitness ball;
    ball.points = sphere_witness.points.topRows(d);
    ball.degree = sphere_witness.degree;
    ball.d = d;
    ball.weights = 0.5 * sphere_witness.weights;
    ball.rank = sphere_witness.rank;
    const auto exponents = graded_exponents(d, ball.degree);
    ball.max_residual =
        (evaluate_monomials(exponents, ball.points) * ball.weights - ball_moments(ball.degree, d)).cwiseAbs().maxCoeff();
    std::vector<double> p_list;
    for (const auto& [p, norm] : sphere_witness.weight_p_norms) p_list.push_back(p);
    ball.weight_p_norms = p_norms(ball.weights, p_list);
    return ball;
}

std::vector<GrowthRow> weight_growth_report(int d, int n, double p, const std::vector<int>& m_list, int trials,
                                            std::uint64_t seed, int threads) {
    if (trials < 1) throw std::invalid_argument("weight_growth_report: trials must be >= 1");
    const int required = polynomial_space_dim(d, n);
    std::vector<GrowthRow> rows;
    for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
        const int m = m_list[mi];
        if (m < required) {
            throw std::invalid_argument("weight_growth_report: m = " + std::to_string(m) + " below dim P_n = " +
                                        std::to_string(required));
        }
        std::vector<double> norms(static_cast<std::size_t>(trials), std::numeric_limits<double>::quiet_NaN());
        parallel_for(norms.size(), threads, [&](std::size_t t) {
            Rng rng(mix_seed(seed, {static_cast<std::uint64_t>(mi), t}));
            const Eigen::MatrixXd nodes = uniform_ball(d, m, rng);
            try {
                norms[t] = min_norm_weights(nodes, n, d, {p}).weight_p_norms.at(p);
            } catch (const RankDeficientError&) {
                // flagged below
            }
        });
        GrowthRow row;
        row.m = m;
        row.p = p;
        row.reference = std::pow(static_cast<double>(m), 1.0 - p);
        for (double v : norms) {
            if (std::isnan(v)) {
                ++row.skipped_trials;
            } else {
                row.trial_norms.push_back(v);
            }
        }
        row.feasible_trials = static_cast<int>(row.trial_norms.size());
        row.median_norm = row.trial_norms.empty() ? std::numeric_limits<double>::quiet_NaN() : median(row.trial_norms);
        rows.push_back(std::move(row));
    }
    return rows;
}

double weighted_sphere_norm_p(int d, int n, const Eigen::VectorXd& coeffs, double p) {
    const SphereRule rule = abs_last_coordinate_sphere_rule(d + 1, weighted_norm_degree(p, n));
    const Eigen::VectorXd values = evaluate_monomials(sphere_exponents(d, n), rule.nodes).transpose() * coeffs;
    return values.array().abs().pow(p).matrix().dot(rule.weights) / sphere_surface_area(d + 1);
}

MzReport mz_check(int d, int n, int m, double p, int trials, std::uint64_t seed, const MzOptions& opts) {
    if (m < 1) throw std::invalid_argument("mz_check: m must be >= 1");
    if (trials < 1) throw std::invalid_argument("mz_check: trials must be >= 1");
    if (!(p > 0.0)) throw std::invalid_argument("mz_check: p must be positive");
    const auto exponents = sphere_exponents(d, n);
    const auto basis_size = static_cast<Eigen::Index>(exponents.size());
    const SphereRule rule = abs_last_coordinate_sphere_rule(d + 1, weighted_norm_degree(p, n));
    const Eigen::MatrixXd rule_basis = evaluate_monomials(exponents, rule.nodes);
    const double area = sphere_surface_area(d + 1);
    const Eigen::VectorXd moments = sphere_moments(d, n);

    MzReport report;
    report.d = d;
    report.n = n;
    report.m = m;
    report.p = p;
    report.trials.resize(static_cast<std::size_t>(trials));
    parallel_for(report.trials.size(), opts.threads, [&](std::size_t t) {
        Rng rng(mix_seed(seed, {t}));
        const Eigen::MatrixXd nodes = uniform_sphere(d + 1, m, rng);
        const Eigen::MatrixXd node_basis = evaluate_monomials(exponents, nodes);
        const Eigen::ArrayXd w = nodes.row(d).transpose().array().abs();
        std::normal_distribution<double> normal(0.0, 1.0);
        MzTrial out;
        out.trial = static_cast<int>(t);
        out.min_ratio = std::numeric_limits<double>::infinity();
        out.max_ratio = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < opts.polys_per_trial; ++k) {
            Eigen::VectorXd coeffs(basis_size);
            for (double& c : coeffs) c = normal(rng);
            const double continuous =
                (rule_basis.transpose() * coeffs).array().abs().pow(p).matrix().dot(rule.weights) / area;
            const double discrete =
                ((node_basis.transpose() * coeffs).array().abs().pow(p) * w).sum() / static_cast<double>(m);
            const double ratio = discrete / continuous;
            out.min_ratio = std::min(out.min_ratio, ratio);
            out.max_ratio = std::max(out.max_ratio, ratio);
        }
        if (opts.with_witness) {
            const MinNormSolution solution = solve_min_norm(node_basis, moments);
            out.residual = solution.max_residual;
            out.weight_norm = solution.weights.array().abs().pow(p).sum();
        } else {
            out.residual = std::numeric_limits<double>::quiet_NaN();
            out.weight_norm = std::numeric_limits<double>::quiet_NaN();
        }
        report.trials[t] = out;
    });
    report.min_ratio = std::numeric_limits<double>::infinity();
    report.max_ratio = -std::numeric_limits<double>::infinity();
    std::vector<double> widths;
    for (const auto& t : report.trials) {
        report.min_ratio = std::min(report.min_ratio, t.min_ratio);
        report.max_ratio = std::max(report.max_ratio, t.max_ratio);
        widths.push_back(t.max_ratio - t.min_ratio);
    }
    report.median_width = median(widths);
    return report;
}

}  // namespace nlq

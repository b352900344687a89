#ifndef NEEDLET_LQ_CUBATURE_MZ_HPP
#define NEEDLET_LQ_CUBATURE_MZ_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace nlq {

/// Exponent tuples of all monomials of total degree <= n in d variables,
/// graded by degree (degree 0 first).
std::vector<std::vector<int>> graded_exponents(int d, int n);

/// Basis of spherical polynomials of degree <= n on S^d in R^{d+1}:
/// x^beta * t^e with t the last coordinate, e in {0, 1}, |beta| + e <= n.
/// Using t^2 = 1 - |x|^2 this spans Pi_n^d without redundancy.
std::vector<std::vector<int>> sphere_exponents(int d, int n);

/// Monomial values, one row per exponent tuple, one column per point.
Eigen::MatrixXd evaluate_monomials(const std::vector<std::vector<int>>& exponents, const Eigen::MatrixXd& points);

/// int_{B^d} x^alpha dx for the graded monomial basis of degree <= n.
Eigen::VectorXd ball_moments(int n, int d);

/// dim P_n on B^d.
int polynomial_space_dim(int d, int n);

class RankDeficientError : public std::runtime_error {
public:
    RankDeficientError(int rank, int required);
    int rank() const { return rank_; }
    int required() const { return required_; }

private:
    int rank_;
    int required_;
};

/// Weights at given nodes reproducing the integral of every polynomial of
/// degree <= n.
struct CubatureWitness {
    Eigen::MatrixXd points;
    int degree = 0;
    int d = 0;
    Eigen::VectorXd weights;
    double max_residual = 0.0;
    int rank = 0;
    std::map<double, double> weight_p_norms;  // p -> sum |a_i|^p
};

/// Minimum Euclidean-norm weights with sum_i a_i P(x_i) = int_{B^d} P dx for
/// P in P_n. Throws RankDeficientError if the nodes do not determine P_n
/// (numerical rank below dim P_n at relative tolerance 1e-10).
CubatureWitness min_norm_weights(const Eigen::MatrixXd& points, int n, int d,
                                 const std::vector<double>& p_list = {1.0, 2.0});

/// Minimum-norm weights at nodes on S^d reproducing
/// int_{S^d} Q(alpha) |alpha_{d+1}| d omega for Q in Pi_n^d.
CubatureWitness sphere_min_norm_weights(const Eigen::MatrixXd& sphere_points, int n,
                                        const std::vector<double>& p_list = {1.0, 2.0});

/// Drops the last coordinate and halves the weights of a sphere witness,
/// then re-measures exactness on P_n of the ball.
CubatureWitness lift_witness_to_ball(const CubatureWitness& sphere_witness);

struct GrowthRow {
    int m = 0;
    double p = 0.0;
    double median_norm = 0.0;
    double reference = 0.0;  // m^{1-p}
    int feasible_trials = 0;
    int skipped_trials = 0;
    std::vector<double> trial_norms;  // in trial order, feasible trials only
};

/// Median over trials of sum |a_i|^p for min-norm weights at m uniform nodes
/// in B^d, for each m.
std::vector<GrowthRow> weight_growth_report(int d, int n, double p, const std::vector<int>& m_list, int trials,
                                            std::uint64_t seed, int threads = 1);

struct MzTrial {
    int trial = 0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double residual = 0.0;     // exactness residual of the sphere witness at these nodes
    double weight_norm = 0.0;  // sum |a_i|^p of that witness
};

struct MzReport {
    int d = 0;
    int n = 0;
    int m = 0;
    double p = 0.0;
    std::vector<MzTrial> trials;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    /// Median over trials of (max_ratio - min_ratio).
    double median_width = 0.0;
};

struct MzOptions {
    int polys_per_trial = 10;
    bool with_witness = true;
    int threads = 1;
};

/// Marcinkiewicz-Zygmund ratio
///   (1/m) sum |Q(alpha_i)|^p w(alpha_i) / ((1/Omega_d) int |Q|^p w d omega)
/// for random Q in Pi_n^d and m uniform nodes on S^d, w = |alpha_{d+1}|.
MzReport mz_check(int d, int n, int m, double p, int trials, std::uint64_t seed, const MzOptions& opts = {});

/// (1/Omega_d) int_{S^d} |Q|^p |alpha_{d+1}| d omega for Q given by sphere
/// basis coefficients. Exact for even integer p.
double weighted_sphere_norm_p(int d, int n, const Eigen::VectorXd& coeffs, double p);

}  // namespace nlq

#endif  // NEEDLET_LQ_CUBATURE_MZ_HPP

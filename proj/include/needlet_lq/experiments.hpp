#ifndef NEEDLET_LQ_EXPERIMENTS_HPP
#define NEEDLET_LQ_EXPERIMENTS_HPP

#include "needlet_lq/kernel.hpp"
#include "needlet_lq/lq_solver.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nlq {

enum class Target { sinc_1d, sinc_2d };

Target parse_target(const std::string& text);
std::string to_string(Target target);

/// sin(t)/t with the removable singularity filled in.
double sinc(double t);

/// Regression function: sinc(x_1) in 1-D, sinc(x_1) sinc(x_2) in 2-D.
double target_value(Target target, const ConstPointRef& x);

struct DatasetSpec {
    Target target = Target::sinc_1d;
    int d = 1;
    int m_train = 256;
    int m_test = 256;
    double noise_var = 0.1;
    std::uint64_t seed = 0;
    bool noiseless_test = false;
};

struct Dataset {
    Eigen::MatrixXd train_x;  // d x m_train
    Eigen::VectorXd train_y;
    Eigen::MatrixXd test_x;
    Eigen::VectorXd test_y;
};

/// Inputs uniform on B^d ([-1, 1] for d = 1); targets f(x) + N(0, noise_var).
Dataset gen_data(const DatasetSpec& spec);

/// exp(-|x-y|^2 / width)
class GaussianKernel : public Kernel {
public:
    GaussianKernel(int d, double width);
    int dimension() const override { return d_; }
    std::string name() const override { return "gaussian"; }
    double operator()(const ConstPointRef& x, const ConstPointRef& y) const override;

private:
    int d_;
    double width_;
};

/// exp(-|x-y| / scale)
class LaplacianKernel : public Kernel {
public:
    LaplacianKernel(int d, double scale);
    int dimension() const override { return d_; }
    std::string name() const override { return "laplacian"; }
    double operator()(const ConstPointRef& x, const ConstPointRef& y) const override;

private:
    int d_;
    double scale_;
};

struct KernelChoice {
    enum class Kind { needlet, gaussian, laplacian };
    Kind kind = Kind::needlet;
    /// n for needlet, width for gaussian, scale for laplacian.
    double param = 8.0;

    /// "needlet:8", "gaussian:0.1", "laplacian:10".
    static KernelChoice parse(const std::string& text);
    std::string label() const;
    std::shared_ptr<const Kernel> make(int d) const;
};

/// Root mean square error over the test set; predictions pass through
/// project_M when clamp_M is set.
double test_error(const FitResult& fit, const LqProblem& problem, const Eigen::MatrixXd& test_x,
                  const Eigen::VectorXd& test_y, std::optional<double> clamp_M = std::nullopt);

/// Number of coefficients with |a_i| > tol.
int sparsity_count(const FitResult& fit, double tol = 1e-6);

/// Closed form for q = 2, proximal gradient otherwise.
FitResult fit_problem(const LqProblem& problem, const ProxGradOptions& opts = {});

struct SweepRow {
    std::string kernel;
    double q = 0.0;
    double lambda = 0.0;
    double test_rmse = 0.0;
    int nnz = 0;
    int iterations = 0;
    bool converged = false;
    std::string status;  // "ok", "not-converged" or the error message
};

struct SweepOptions {
    std::optional<double> clamp_M;
    ProxGradOptions solver;
    double sparsity_tol = 1e-6;
    int threads = 1;
};

/// One fit per (q, lambda) cell over a shared Gram matrix, rows in q-major
/// order. A failing cell is recorded in its row and the sweep continues.
std::vector<SweepRow> sweep_lambda(const Dataset& data, const KernelChoice& kernel, const std::vector<double>& q_list,
                                   const std::vector<double>& lambda_grid, const SweepOptions& opts = {});

enum class SuccessMode { squared, plain };  // delta^2 < eps  |  delta < eps

struct PhaseConfig {
    int d = 1;
    int n = 8;
    double q = 2.0;
    std::vector<int> m_values{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    std::vector<double> eps_values;  // defaults to 20 log-spaced values in [1e-3, 1]
    int repeats = 20;
    std::uint64_t seed = 0;
    double noise_var = 0.1;
    int m_test = 1000;
    bool noiseless_test = true;
    SuccessMode mode = SuccessMode::squared;
    int threads = 1;
};

struct PhaseBand {
    std::optional<double> eps_low;   // smoothed success crosses 0.1
    std::optional<double> eps_high;  // smoothed success crosses 0.9
    std::optional<double> width() const;
};

struct PhaseGrid {
    std::vector<int> m_values;
    std::vector<double> eps_values;
    int repeats = 0;
    Eigen::MatrixXd success;   // rows: m, cols: eps; fractions in [0, 1]
    Eigen::MatrixXd smoothed;  // isotonic in eps per row
    std::vector<PhaseBand> bands;
};

/// Per (m, eps) cell and repeat: fresh data, fit with lambda = eps / m,
/// success if the test error meets the tolerance. Cell seeds depend only on
/// (seed, m index, eps index, repeat).
PhaseGrid phase_transition(const PhaseConfig& config);

/// Isotonic smoothing and band extraction for a filled success matrix.
void smooth_and_band(PhaseGrid& grid);

struct AccuracyConfidenceRow {
    int m = 0;
    double eps = 0.0;
    double failure = 0.0;
};

/// Empirical failure probability 1 - success per cell.
std::vector<AccuracyConfidenceRow> accuracy_confidence_curve(const PhaseGrid& grid);

struct LearningCurveConfig {
    int d = 1;
    int n = 8;
    double q = 2.0;
    std::vector<int> m_values{32, 64, 128, 256, 512};
    std::vector<double> lambda_grid;  // defaults to 20 log-spaced values in [1e-8, 1]
    int trials = 20;
    double noise_var = 0.1;
    int m_test = 1000;
    bool noiseless_test = true;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct LearningCurveRow {
    int m = 0;
    double median_rmse = 0.0;
};

/// Median over trials of the best-over-lambda test RMSE for each m.
std::vector<LearningCurveRow> learning_curve(const LearningCurveConfig& config);

}  // namespace nlq

#endif  // NEEDLET_LQ_EXPERIMENTS_HPP

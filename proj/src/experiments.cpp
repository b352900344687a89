#include "needlet_lq/experiments.hpp"

#include "needlet_lq/needlet_kernel.hpp"
#include "needlet_lq/parallel.hpp"
#include "needlet_lq/random.hpp"
#include "needlet_lq/stats.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nlq {

namespace {

double rmse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& targets) {
    if (targets.size() == 0) throw std::invalid_argument("test_error: empty test set");
    return std::sqrt((predictions - targets).squaredNorm() / static_cast<double>(targets.size()));
}

Eigen::VectorXd clamp_all(Eigen::VectorXd values, std::optional<double> M) {
    if (M) {
        for (double& v : values) v = project_M(v, *M);
    }
    return values;
}

double default_M(const Eigen::VectorXd& targets, std::optional<double> clamp_M) {
    if (clamp_M) return *clamp_M;
    const double largest = targets.cwiseAbs().maxCoeff();
    return largest > 0.0 ? largest : 1.0;
}

// Interpolated eps (log scale) where a non-decreasing curve first reaches
// level; empty when the crossing lies outside the grid.
std::optional<double> crossing(const Eigen::RowVectorXd& curve, const std::vector<double>& eps, double level) {
    for (Eigen::Index i = 0; i < curve.size(); ++i) {
        if (curve[i] >= level) {
            if (i == 0) return std::nullopt;
            const double lo = curve[i - 1];
            const double hi = curve[i];
            const double frac = hi > lo ? (level - lo) / (hi - lo) : 1.0;
            const double a = std::log(eps[i - 1]);
            const double b = std::log(eps[i]);
            return std::exp(a + frac * (b - a));
        }
    }
    return std::nullopt;
}

std::string short_number(double value) {
    std::ostringstream out;
    out << value;
    return out.str();
}

}  // namespace

Target parse_target(const std::string& text) {
    if (text == "sinc-1d") return Target::sinc_1d;
    if (text == "sinc-2d") return Target::sinc_2d;
    throw std::invalid_argument("unknown target '" + text + "' (expected sinc-1d or sinc-2d)");
}

std::string to_string(Target target) { return target == Target::sinc_1d ? "sinc-1d" : "sinc-2d"; }

double sinc(double t) {
    if (std::abs(t) < 1e-8) return 1.0 - t * t / 6.0;
    return std::sin(t) / t;
}

double target_value(Target target, const ConstPointRef& x) {
    switch (target) {
        case Target::sinc_1d: return sinc(x[0]);
        case Target::sinc_2d:
            if (x.size() < 2) throw std::invalid_argument("sinc-2d needs d >= 2");
            return sinc(x[0]) * sinc(x[1]);
    }
    return 0.0;
}

Dataset gen_data(const DatasetSpec& spec) {
    if (spec.m_train < 1) throw std::invalid_argument("gen_data: m_train must be >= 1");
    if (spec.m_test < 0) throw std::invalid_argument("gen_data: m_test must be >= 0");
    if (!(spec.noise_var >= 0.0)) throw std::invalid_argument("gen_data: noise_var must be >= 0");
    if (spec.target == Target::sinc_1d && spec.d != 1) throw std::invalid_argument("gen_data: sinc-1d needs d = 1");
    if (spec.target == Target::sinc_2d && spec.d != 2) throw std::invalid_argument("gen_data: sinc-2d needs d = 2");
    const double sigma = std::sqrt(spec.noise_var);

    auto draw = [&](int m, std::uint64_t stream, bool noisy, Eigen::MatrixXd& x, Eigen::VectorXd& y) {
        Rng rng(mix_seed(spec.seed, {stream}));
        x = uniform_ball(spec.d, m, rng);
        y.resize(m);
        std::normal_distribution<double> noise(0.0, 1.0);
        for (int i = 0; i < m; ++i) {
            y[i] = target_value(spec.target, x.col(i));
            if (noisy && sigma > 0.0) y[i] += sigma * noise(rng);
        }
    };
    Dataset data;
    draw(spec.m_train, 0, true, data.train_x, data.train_y);
    draw(spec.m_test, 1, !spec.noiseless_test, data.test_x, data.test_y);
    return data;
}

GaussianKernel::GaussianKernel(int d, double width) : d_(d), width_(width) {
    if (!(width > 0.0)) throw std::invalid_argument("GaussianKernel: width must be positive");
}

double GaussianKernel::operator()(const ConstPointRef& x, const ConstPointRef& y) const {
    return std::exp(-(x - y).squaredNorm() / width_);
}

LaplacianKernel::LaplacianKernel(int d, double scale) : d_(d), scale_(scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("LaplacianKernel: scale must be positive");
}

double LaplacianKernel::operator()(const ConstPointRef& x, const ConstPointRef& y) const {
    return std::exp(-(x - y).norm() / scale_);
}

KernelChoice KernelChoice::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    KernelChoice choice;
    if (kind == "needlet") {
        choice.kind = Kind::needlet;
        choice.param = 8.0;
    } else if (kind == "gaussian") {
        choice.kind = Kind::gaussian;
        choice.param = 0.1;
    } else if (kind == "laplacian") {
        choice.kind = Kind::laplacian;
        choice.param = 10.0;
    } else {
        throw std::invalid_argument("unknown kernel '" + text + "' (needlet:N, gaussian:W, laplacian:S)");
    }
    if (colon != std::string::npos) {
        std::size_t used = 0;
        const std::string rest = text.substr(colon + 1);
        choice.param = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("bad kernel parameter in '" + text + "'");
    }
    if (choice.kind == Kind::needlet && (choice.param < 1 || choice.param != std::floor(choice.param))) {
        throw std::invalid_argument("needlet degree must be a positive integer");
    }
    return choice;
}

std::string KernelChoice::label() const {
    switch (kind) {
        case Kind::needlet: return "needlet:" + std::to_string(static_cast<int>(param));
        case Kind::gaussian: return "gaussian:" + short_number(param);
        case Kind::laplacian: return "laplacian:" + short_number(param);
    }
    return "unknown";
}

std::shared_ptr<const Kernel> KernelChoice::make(int d) const {
    switch (kind) {
        case Kind::needlet: return std::make_shared<NeedletKernel>(d, static_cast<int>(param));
        case Kind::gaussian: return std::make_shared<GaussianKernel>(d, param);
        case Kind::laplacian: return std::make_shared<LaplacianKernel>(d, param);
    }
    throw std::logic_error("KernelChoice::make");
}

double test_error(const FitResult& fit, const LqProblem& problem, const Eigen::MatrixXd& test_x,
                  const Eigen::VectorXd& test_y, std::optional<double> clamp_M) {
    return rmse(clamp_all(predict_batch(fit, problem, test_x, false), clamp_M), test_y);
}

int sparsity_count(const FitResult& fit, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("sparsity_count: tol must be positive");
    return static_cast<int>((fit.coeffs.array().abs() > tol).count());
}

FitResult fit_problem(const LqProblem& problem, const ProxGradOptions& opts) {
    return problem.q() == 2.0 ? solve_ridge(problem) : solve_prox_grad(problem, opts);
}

std::vector<SweepRow> sweep_lambda(const Dataset& data, const KernelChoice& kernel_choice,
                                   const std::vector<double>& q_list, const std::vector<double>& lambda_grid,
                                   const SweepOptions& opts) {
    if (q_list.empty() || lambda_grid.empty()) throw std::invalid_argument("sweep_lambda: empty grid");
    const int d = static_cast<int>(data.train_x.rows());
    const auto kernel = kernel_choice.make(d);
    auto gram = std::make_shared<const Eigen::MatrixXd>(kernel->gram(data.train_x));
    const LqProblem base(data.train_x, data.train_y, kernel, gram, 1.0, 2.0, default_M(data.train_y, opts.clamp_M));
    const Eigen::MatrixXd test_cross = kernel->cross(data.test_x, data.train_x);

    std::vector<SweepRow> rows(q_list.size() * lambda_grid.size());
    parallel_for(rows.size(), opts.threads, [&](std::size_t cell) {
        SweepRow& row = rows[cell];
        row.kernel = kernel_choice.label();
        row.q = q_list[cell / lambda_grid.size()];
        row.lambda = lambda_grid[cell % lambda_grid.size()];
        try {
            const LqProblem problem = base.with_regularization(row.lambda, row.q);
            const FitResult fit = fit_problem(problem, opts.solver);
            row.test_rmse = rmse(clamp_all(test_cross * fit.coeffs, opts.clamp_M), data.test_y);
            row.nnz = sparsity_count(fit, opts.sparsity_tol);
            row.iterations = fit.iterations;
            row.converged = fit.converged;
            row.status = fit.converged ? "ok" : "not-converged";
        } catch (const std::exception& e) {
            row.test_rmse = std::numeric_limits<double>::quiet_NaN();
            row.status = e.what();
        }
    });
    return rows;
}

std::optional<double> PhaseBand::width() const {
    if (eps_low && eps_high) return *eps_high - *eps_low;
    return std::nullopt;
}

void smooth_and_band(PhaseGrid& grid) {
    const auto rows = grid.success.rows();
    grid.smoothed.resize(rows, grid.success.cols());
    grid.bands.assign(static_cast<std::size_t>(rows), {});
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::RowVectorXd raw = grid.success.row(r);
        const auto fitted = isotonic_increasing(std::span<const double>(raw.data(), static_cast<std::size_t>(raw.size())));
        for (Eigen::Index c = 0; c < raw.size(); ++c) grid.smoothed(r, c) = fitted[static_cast<std::size_t>(c)];
        const Eigen::RowVectorXd smooth = grid.smoothed.row(r);
        grid.bands[r].eps_low = crossing(smooth, grid.eps_values, 0.1);
        grid.bands[r].eps_high = crossing(smooth, grid.eps_values, 0.9);
    }
}

PhaseGrid phase_transition(const PhaseConfig& config) {
    if (config.m_values.empty() || config.repeats < 1) throw std::invalid_argument("phase_transition: empty grid");
    PhaseGrid grid;
    grid.m_values = config.m_values;
    grid.eps_values = config.eps_values.empty() ? logspace(1e-3, 1.0, 20) : config.eps_values;
    grid.repeats = config.repeats;
    const auto n_m = grid.m_values.size();
    const auto n_eps = grid.eps_values.size();
    const auto kernel = std::make_shared<const NeedletKernel>(config.d, config.n);
    const Target target = config.d == 1 ? Target::sinc_1d : Target::sinc_2d;

    std::vector<int> hits(n_m * n_eps, 0);
    parallel_for(n_m * n_eps, config.threads, [&](std::size_t cell) {
        const std::size_t mi = cell / n_eps;
        const std::size_t ei = cell % n_eps;
        const int m = grid.m_values[mi];
        const double eps = grid.eps_values[ei];
        int count = 0;
        for (int r = 0; r < config.repeats; ++r) {
            DatasetSpec spec;
            spec.target = target;
            spec.d = config.d;
            spec.m_train = m;
            spec.m_test = config.m_test;
            spec.noise_var = config.noise_var;
            spec.noiseless_test = config.noiseless_test;
            spec.seed = mix_seed(config.seed, {mi, ei, static_cast<std::uint64_t>(r)});
            const Dataset data = gen_data(spec);
            const LqProblem problem(data.train_x, data.train_y, kernel, eps / m, config.q,
                                    default_M(data.train_y, std::nullopt));
            const FitResult fit = fit_problem(problem);
            const double delta = test_error(fit, problem, data.test_x, data.test_y);
            const bool success = config.mode == SuccessMode::squared ? delta * delta < eps : delta < eps;
            count += success ? 1 : 0;
        }
        hits[cell] = count;
    });
    grid.success.resize(static_cast<Eigen::Index>(n_m), static_cast<Eigen::Index>(n_eps));
    for (std::size_t cell = 0; cell < hits.size(); ++cell) {
        grid.success(static_cast<Eigen::Index>(cell / n_eps), static_cast<Eigen::Index>(cell % n_eps)) =
            static_cast<double>(hits[cell]) / config.repeats;
    }
    smooth_and_band(grid);
    return grid;
}

std::vector<AccuracyConfidenceRow> accuracy_confidence_curve(const PhaseGrid& grid) {
    std::vector<AccuracyConfidenceRow> rows;
    for (Eigen::Index r = 0; r < grid.success.rows(); ++r) {
        for (Eigen::Index c = 0; c < grid.success.cols(); ++c) {
            rows.push_back({grid.m_values[r], grid.eps_values[c], 1.0 - grid.success(r, c)});
        }
    }
    return rows;
}

std::vector<LearningCurveRow> learning_curve(const LearningCurveConfig& config) {
    const std::vector<double> lambdas = config.lambda_grid.empty() ? logspace(1e-8, 1.0, 20) : config.lambda_grid;
    const auto kernel = std::make_shared<const NeedletKernel>(config.d, config.n);
    const Target target = config.d == 1 ? Target::sinc_1d : Target::sinc_2d;
    std::vector<LearningCurveRow> rows;
    for (std::size_t mi = 0; mi < config.m_values.size(); ++mi) {
        const int m = config.m_values[mi];
        std::vector<double> best(static_cast<std::size_t>(config.trials));
        parallel_for(best.size(), config.threads, [&](std::size_t t) {
            DatasetSpec spec;
            spec.target = target;
            spec.d = config.d;
            spec.m_train = m;
            spec.m_test = config.m_test;
            spec.noise_var = config.noise_var;
            spec.noiseless_test = config.noiseless_test;
            spec.seed = mix_seed(config.seed, {mi, t});
            const Dataset data = gen_data(spec);
            auto gram = std::make_shared<const Eigen::MatrixXd>(kernel->gram(data.train_x));
            const Eigen::MatrixXd test_cross = kernel->cross(data.test_x, data.train_x);
            const LqProblem base(data.train_x, data.train_y, kernel, gram, lambdas.front(), config.q,
                                 default_M(data.train_y, std::nullopt));
            double lowest = std::numeric_limits<double>::infinity();
            for (double lambda : lambdas) {
                const FitResult fit = fit_problem(base.with_regularization(lambda, config.q));
                lowest = std::min(lowest, rmse(test_cross * fit.coeffs, data.test_y));
            }
            best[t] = lowest;
        });
        rows.push_back({m, median(best)});
    }
    return rows;
}

}  // namespace nlq

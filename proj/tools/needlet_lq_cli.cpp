// needlet-lq: command line front end for the needlet kernel, the l^q
// solvers and the experiment protocols.

#include "needlet_lq/csv.hpp"
#include "needlet_lq/cubature_mz.hpp"
#include "needlet_lq/experiments.hpp"
#include "needlet_lq/lq_solver.hpp"
#include "needlet_lq/needlet_kernel.hpp"
#include "needlet_lq/random.hpp"
#include "needlet_lq/selftest.hpp"
#include "needlet_lq/stats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>

namespace {

struct Common {
    std::uint64_t seed = 0;
    std::string out;
    int threads = 1;
};

// Owns the file stream when --out is given; otherwise writes to stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

Eigen::VectorXd parse_point(const std::string& text, int d) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string cell;
    while (std::getline(stream, cell, ',')) values.push_back(std::stod(cell));
    if (static_cast<int>(values.size()) != d) {
        throw std::invalid_argument("point '" + text + "' has " + std::to_string(values.size()) +
                                    " coordinates, expected " + std::to_string(d));
    }
    return Eigen::Map<Eigen::VectorXd>(values.data(), d);
}

std::vector<double> lambda_grid(const std::vector<double>& explicit_values, double lo, double hi, int count) {
    return explicit_values.empty() ? nlq::logspace(lo, hi, count) : explicit_values;
}

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--seed", common.seed, "Base random seed")->capture_default_str();
    cmd->add_option("--out", common.out, "Output CSV path (default: stdout)");
    cmd->add_option("--threads", common.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

int run_selftest(std::uint64_t seed) {
    const auto results = nlq::run_selftest(seed);
    int failures = 0;
    for (const auto& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.module << ": " << r.name << "  (measured "
                  << nlq::format_double(r.measured) << ", limit " << nlq::format_double(r.threshold) << ")\n";
        failures += r.passed ? 0 : 1;
    }
    std::cout << results.size() - failures << "/" << results.size() << " checks passed\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Needlet kernel l^q regularization toolkit"};
    app.set_config("--config", "", "Read option values from a key=value file");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(NEEDLET_LQ_VERSION));

    Common common;

    // selftest
    auto* selftest = app.add_subcommand("selftest", "Run the quick invariant checks of every module");
    selftest->add_option("--seed", common.seed, "Base random seed")->capture_default_str();

    // kernel-eval
    int d = 2, n = 8;
    std::string x_text, y_text;
    bool reproducing = false;
    auto* kernel_eval = app.add_subcommand("kernel-eval", "Print the needlet kernel value L_2n(x, y)");
    kernel_eval->add_option("--d", d, "Dimension")->capture_default_str();
    kernel_eval->add_option("--n", n, "Degree parameter")->capture_default_str();
    kernel_eval->add_option("--x", x_text, "Point x, comma separated")->required();
    kernel_eval->add_option("--y", y_text, "Point y, comma separated")->required();
    kernel_eval->add_flag("--reproducing", reproducing, "Use the hard-cutoff reproducing kernel K_n instead");

    // kernel-profile
    int l = 2, samples = 500;
    auto* kernel_profile = app.add_subcommand("kernel-profile", "CSV of kernel decay against the ball distance");
    kernel_profile->add_option("--d", d, "Dimension")->capture_default_str();
    kernel_profile->add_option("--n", n, "Degree parameter")->capture_default_str();
    kernel_profile->add_option("--l", l, "Decay order in the normalisation")->capture_default_str();
    kernel_profile->add_option("--x", x_text, "Anchor point (default: origin)");
    kernel_profile->add_option("--samples", samples, "Random partner points")->capture_default_str();
    add_common(kernel_profile, common);

    // fit
    double q = 2.0, lambda = 1e-3, clamp = 0.0;
    std::string data_path, kernel_text;
    int max_iter = 20000;
    double tol = 1e-8;
    bool backtracking = false;
    auto* fit_cmd = app.add_subcommand("fit", "Fit l^q coefficients to a sample CSV (x_1..x_d,y)");
    fit_cmd->add_option("--d", d, "Dimension")->capture_default_str();
    fit_cmd->add_option("--n", n, "Needlet degree parameter")->capture_default_str();
    fit_cmd->add_option("--kernel", kernel_text, "Kernel override: needlet:N, gaussian:W, laplacian:S");
    fit_cmd->add_option("--q", q, "Penalty exponent")->capture_default_str();
    fit_cmd->add_option("--lambda", lambda, "Regularization parameter")->capture_default_str();
    fit_cmd->add_option("--data", data_path, "Sample CSV")->required();
    fit_cmd->add_option("--clamp", clamp, "Target bound M (also clamps reported predictions)");
    fit_cmd->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
    fit_cmd->add_option("--tol", tol, "Coefficient change tolerance")->capture_default_str();
    fit_cmd->add_flag("--backtracking", backtracking, "Backtracking step search");
    add_common(fit_cmd, common);

    // gen-data
    std::string target_text = "sinc-1d", split = "train";
    int m_train = 256, m_test = 256;
    double noise_var = 0.1;
    bool noiseless_test = false;
    auto* gen = app.add_subcommand("gen-data", "Write a synthetic sample CSV");
    gen->add_option("--target", target_text, "sinc-1d | sinc-2d")->capture_default_str();
    gen->add_option("--m-train", m_train, "Training samples")->capture_default_str();
    gen->add_option("--m-test", m_test, "Test samples")->capture_default_str();
    gen->add_option("--noise-var", noise_var, "Gaussian noise variance")->capture_default_str();
    gen->add_option("--split", split, "train | test")->capture_default_str();
    gen->add_flag("--noiseless-test", noiseless_test, "Test targets without noise");
    add_common(gen, common);

    // sweep-lambda
    std::vector<double> q_list{0.5, 2.0 / 3.0, 1.0, 2.0};
    std::vector<double> lambdas;
    double lambda_lo = 1e-6, lambda_hi = 1e2;
    int lambda_count = 20;
    std::string sweep_kernel = "needlet:8";
    auto* sweep = app.add_subcommand("sweep-lambda", "Test error and sparsity over a (q, lambda) grid");
    sweep->add_option("--target", target_text, "sinc-1d | sinc-2d")->capture_default_str();
    sweep->add_option("--kernel", sweep_kernel, "needlet:N, gaussian:W, laplacian:S")->capture_default_str();
    sweep->add_option("--q", q_list, "Penalty exponents")->delimiter(',');
    sweep->add_option("--lambdas", lambdas, "Explicit lambda values")->delimiter(',');
    sweep->add_option("--lambda-min", lambda_lo, "Smallest lambda of the log grid")->capture_default_str();
    sweep->add_option("--lambda-max", lambda_hi, "Largest lambda of the log grid")->capture_default_str();
    sweep->add_option("--lambda-count", lambda_count, "Log grid size")->capture_default_str();
    sweep->add_option("--m-train", m_train, "Training samples")->capture_default_str();
    sweep->add_option("--m-test", m_test, "Test samples")->capture_default_str();
    sweep->add_option("--noise-var", noise_var, "Gaussian noise variance")->capture_default_str();
    sweep->add_option("--clamp", clamp, "Clamp predictions to [-M, M]");
    sweep->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
    sweep->add_flag("--noiseless-test", noiseless_test, "Test targets without noise");
    add_common(sweep, common);

    // phase
    nlq::PhaseConfig phase_cfg;
    double eps_lo = 1e-3, eps_hi = 1.0;
    int eps_count = 20;
    std::string success_mode = "squared", bands_path;
    bool noisy_test = false;
    auto* phase = app.add_subcommand("phase", "Success-fraction grid over (m, eps) with lambda = eps/m");
    phase->add_option("--d", phase_cfg.d, "Dimension")->capture_default_str();
    phase->add_option("--n", phase_cfg.n, "Needlet degree parameter")->capture_default_str();
    phase->add_option("--q", phase_cfg.q, "Penalty exponent")->capture_default_str();
    phase->add_option("--m-values", phase_cfg.m_values, "Sample sizes")->delimiter(',');
    phase->add_option("--eps-min", eps_lo, "Smallest tolerance")->capture_default_str();
    phase->add_option("--eps-max", eps_hi, "Largest tolerance")->capture_default_str();
    phase->add_option("--eps-count", eps_count, "Number of log-spaced tolerances")->capture_default_str();
    phase->add_option("--repeats", phase_cfg.repeats, "Repeats per cell")->capture_default_str();
    phase->add_option("--noise-var", phase_cfg.noise_var, "Training noise variance")->capture_default_str();
    phase->add_option("--m-test", phase_cfg.m_test, "Test samples")->capture_default_str();
    phase->add_option("--success", success_mode, "squared (delta^2 < eps) | plain (delta < eps)")
        ->capture_default_str();
    phase->add_flag("--noisy-test", noisy_test, "Add training-level noise to test targets");
    phase->add_option("--bands", bands_path, "Also write per-m transition bands to this CSV");
    add_common(phase, common);

    // mz-check
    int mz_m = 10000, trials = 20, polys = 10;
    double p = 2.0;
    auto* mz = app.add_subcommand("mz-check", "Marcinkiewicz-Zygmund ratios at random sphere nodes");
    mz->add_option("--d", d, "Sphere S^d dimension")->capture_default_str();
    mz->add_option("--n", n, "Polynomial degree")->capture_default_str();
    mz->add_option("--m", mz_m, "Nodes per trial")->capture_default_str();
    mz->add_option("--p", p, "Norm order")->capture_default_str();
    mz->add_option("--trials", trials, "Trials")->capture_default_str();
    mz->add_option("--polys", polys, "Random polynomials per trial")->capture_default_str();
    add_common(mz, common);

    // weight-growth
    std::vector<int> growth_m{500, 1000, 2000, 4000};
    auto* growth = app.add_subcommand("weight-growth", "Median weight p-norms of min-norm cubature at random nodes");
    growth->add_option("--d", d, "Dimension")->capture_default_str();
    growth->add_option("--n", n, "Polynomial degree")->capture_default_str();
    growth->add_option("--p", p, "Norm order")->capture_default_str();
    growth->add_option("--m-values", growth_m, "Node counts")->delimiter(',');
    growth->add_option("--trials", trials, "Trials per m")->capture_default_str();
    add_common(growth, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*selftest) return run_selftest(common.seed);

        if (*kernel_eval) {
            const Eigen::VectorXd x = parse_point(x_text, d);
            const Eigen::VectorXd y = parse_point(y_text, d);
            const double value = reproducing ? nlq::ReproducingKernel(d, n)(x, y) : nlq::NeedletKernel(d, n)(x, y);
            std::cout << nlq::format_double(value) << '\n';
            return 0;
        }

        if (*kernel_profile) {
            const nlq::NeedletKernel kernel(d, n);
            const Eigen::VectorXd x = x_text.empty() ? Eigen::VectorXd::Zero(d) : parse_point(x_text, d);
            nlq::Rng rng(nlq::mix_seed(common.seed, {0}));
            const Eigen::MatrixXd ys = nlq::uniform_ball(d, samples, rng);
            struct Row {
                double rho, value, profile;
            };
            std::vector<Row> rows;
            for (Eigen::Index i = 0; i < ys.cols(); ++i) {
                rows.push_back({nlq::ball_distance(x, ys.col(i)), std::abs(kernel(x, ys.col(i))),
                                nlq::localization_profile(kernel, x, ys.col(i), l)});
            }
            std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.rho < b.rho; });
            Output out(common.out);
            nlq::CsvWriter csv(out.stream());
            csv.header({"rho", "abs_kernel", "normalized_profile"});
            for (const auto& r : rows) csv.row({r.rho, r.value, r.profile});
            return 0;
        }

        if (*fit_cmd) {
            std::ifstream in(data_path);
            if (!in) throw std::runtime_error("cannot open " + data_path);
            const nlq::SampleTable table = nlq::read_samples(in, d);
            const auto choice = kernel_text.empty() ? nlq::KernelChoice{nlq::KernelChoice::Kind::needlet, double(n)}
                                                    : nlq::KernelChoice::parse(kernel_text);
            const double M = clamp > 0.0 ? clamp : std::max(table.targets.cwiseAbs().maxCoeff(), 1e-300);
            const nlq::LqProblem problem(table.points, table.targets, choice.make(d), lambda, q, M);
            for (const auto& w : problem.warnings()) std::cerr << "warning: " << w << '\n';
            nlq::ProxGradOptions opts;
            opts.max_iter = max_iter;
            opts.tol = tol;
            opts.backtracking = backtracking;
            const nlq::FitResult fit = nlq::fit_problem(problem, opts);
            Output out(common.out);
            nlq::CsvWriter csv(out.stream());
            csv.header({"index", "coeff"});
            for (Eigen::Index i = 0; i < fit.coeffs.size(); ++i) csv.row({static_cast<long long>(i), fit.coeffs[i]});
            std::ostream& summary = common.out.empty() ? std::cerr : std::cout;
            summary << "objective=" << nlq::format_double(nlq::objective(problem, fit.coeffs))
                    << " nnz=" << nlq::sparsity_count(fit) << " iterations=" << fit.iterations
                    << " converged=" << (fit.converged ? "true" : "false") << " solver=" << nlq::to_string(fit.solver_id)
                    << (fit.note.empty() ? "" : " note=\"" + fit.note + "\"") << '\n';
            return fit.converged ? 0 : 2;
        }

        if (*gen) {
            nlq::DatasetSpec spec;
            spec.target = nlq::parse_target(target_text);
            spec.d = spec.target == nlq::Target::sinc_1d ? 1 : 2;
            spec.m_train = m_train;
            spec.m_test = m_test;
            spec.noise_var = noise_var;
            spec.seed = common.seed;
            spec.noiseless_test = noiseless_test;
            const nlq::Dataset data = nlq::gen_data(spec);
            if (split != "train" && split != "test") throw std::invalid_argument("--split must be train or test");
            const Eigen::MatrixXd& xs = split == "train" ? data.train_x : data.test_x;
            const Eigen::VectorXd& ys = split == "train" ? data.train_y : data.test_y;
            Output out(common.out);
            nlq::CsvWriter csv(out.stream());
            std::vector<std::string> header;
            for (int k = 1; k <= spec.d; ++k) header.push_back("x_" + std::to_string(k));
            header.push_back("y");
            csv.header(header);
            for (Eigen::Index i = 0; i < ys.size(); ++i) {
                std::vector<nlq::CsvCell> row;
                for (int k = 0; k < spec.d; ++k) row.emplace_back(xs(k, i));
                row.emplace_back(ys[i]);
                csv.row(row);
            }
            return 0;
        }

        if (*sweep) {
            nlq::DatasetSpec spec;
            spec.target = nlq::parse_target(target_text);
            spec.d = spec.target == nlq::Target::sinc_1d ? 1 : 2;
            spec.m_train = m_train;
            spec.m_test = m_test;
            spec.noise_var = noise_var;
            spec.seed = common.seed;
            spec.noiseless_test = noiseless_test;
            nlq::SweepOptions opts;
            if (clamp > 0.0) opts.clamp_M = clamp;
            opts.threads = common.threads;
            opts.solver.max_iter = max_iter;
            const auto rows = nlq::sweep_lambda(nlq::gen_data(spec), nlq::KernelChoice::parse(sweep_kernel), q_list,
                                                lambda_grid(lambdas, lambda_lo, lambda_hi, lambda_count), opts);
            Output out(common.out);
            nlq::CsvWriter csv(out.stream());
            csv.header({"kernel", "q", "lambda", "test_rmse", "nnz", "iterations", "status"});
            for (const auto& r : rows) {
                csv.row({r.kernel, r.q, r.lambda, r.test_rmse, static_cast<long long>(r.nnz),
                         static_cast<long long>(r.iterations), r.status});
            }
            return 0;
        }

        if (*phase) {
            phase_cfg.eps_values = nlq::logspace(eps_lo, eps_hi, eps_count);
            phase_cfg.seed = common.seed;
            phase_cfg.threads = common.threads;
            phase_cfg.noiseless_test = !noisy_test;
            if (success_mode == "squared") {
                phase_cfg.mode = nlq::SuccessMode::squared;
            } else if (success_mode == "plain") {
                phase_cfg.mode = nlq::SuccessMode::plain;
            } else {
                throw std::invalid_argument("--success must be squared or plain");
            }
            const nlq::PhaseGrid grid = nlq::phase_transition(phase_cfg);
            {
                Output out(common.out);
                nlq::CsvWriter csv(out.stream());
                csv.header({"m", "eps", "success_fraction", "smoothed", "failure_probability"});
                for (Eigen::Index r = 0; r < grid.success.rows(); ++r) {
                    for (Eigen::Index c = 0; c < grid.success.cols(); ++c) {
                        csv.row({static_cast<long long>(grid.m_values[r]), grid.eps_values[c], grid.success(r, c),
                                 grid.smoothed(r, c), 1.0 - grid.success(r, c)});
                    }
                }
            }
            if (!bands_path.empty()) {
                Output out(bands_path);
                nlq::CsvWriter csv(out.stream());
                csv.header({"m", "eps_low", "eps_high", "width"});
                const double nan = std::numeric_limits<double>::quiet_NaN();
                for (std::size_t r = 0; r < grid.bands.size(); ++r) {
                    const auto& b = grid.bands[r];
                    csv.row({static_cast<long long>(grid.m_values[r]), b.eps_low.value_or(nan), b.eps_high.value_or(nan),
                             b.width().value_or(nan)});
                }
            }
            return 0;
        }

        if (*mz) {
            nlq::MzOptions opts;
            opts.polys_per_trial = polys;
            opts.threads = common.threads;
            const nlq::MzReport report = nlq::mz_check(d, n, mz_m, p, trials, common.seed, opts);
            Output out(common.out);
            nlq::CsvWriter csv(out.stream());
            csv.header({"trial", "min_ratio", "max_ratio", "residual", "weight_norm"});
            for (const auto& t : report.trials) {
                csv.row({static_cast<long long>(t.trial), t.min_ratio, t.max_ratio, t.residual, t.weight_norm});
            }
            return 0;
        }

        if (*growth) {
            const auto rows = nlq::weight_growth_report(d, n, p, growth_m, trials, common.seed, common.threads);
            Output out(common.out);
            nlq::CsvWriter csv(out.stream());
            csv.header({"m", "p", "median_norm", "m_pow_1_minus_p", "feasible_trials", "skipped_trials"});
            for (const auto& r : rows) {
                csv.row({static_cast<long long>(r.m), r.p, r.median_norm, r.reference,
                         static_cast<long long>(r.feasible_trials), static_cast<long long>(r.skipped_trials)});
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

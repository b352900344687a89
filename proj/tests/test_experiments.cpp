#include "needlet_lq/experiments.hpp"
#include "needlet_lq/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace nlq;

namespace {

DatasetSpec small_spec(std::uint64_t seed, double noise = 0.1) {
    DatasetSpec spec;
    spec.m_train = 40;
    spec.m_test = 60;
    spec.noise_var = noise;
    spec.seed = seed;
    return spec;
}

}  // namespace

TEST_CASE("targets") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(sinc(1e-9) == doctest::Approx(1.0));
    Eigen::VectorXd x(2);
    x << 0.5, -0.25;
    CHECK(target_value(Target::sinc_2d, x) == doctest::Approx(std::sin(0.5) / 0.5 * std::sin(0.25) / 0.25));
    CHECK(parse_target("sinc-2d") == Target::sinc_2d);
    CHECK(to_string(Target::sinc_1d) == "sinc-1d");
    CHECK_THROWS_AS(parse_target("sinc3"), std::invalid_argument);
}

TEST_CASE("gen_data") {
    const Dataset a = gen_data(small_spec(3)), b = gen_data(small_spec(3)), c = gen_data(small_spec(4));
    CHECK(a.train_x == b.train_x);
    CHECK(a.train_y == b.train_y);
    CHECK(a.test_y == b.test_y);
    CHECK(a.train_x != c.train_x);
    CHECK(a.train_x.cwiseAbs().maxCoeff() <= 1.0);

    const Dataset clean = gen_data(small_spec(3, 0.0));
    for (Eigen::Index i = 0; i < clean.train_y.size(); ++i)
        CHECK(clean.train_y[i] == sinc(clean.train_x(0, i)));
    // same inputs regardless of noise level
    CHECK(clean.train_x == a.train_x);

    DatasetSpec two = small_spec(5);
    two.target = Target::sinc_2d;
    two.d = 2;
    two.noiseless_test = true;
    const Dataset disc = gen_data(two);
    CHECK(disc.train_x.colwise().norm().maxCoeff() <= 1.0);
    for (Eigen::Index i = 0; i < disc.test_y.size(); ++i)
        CHECK(disc.test_y[i] == target_value(Target::sinc_2d, disc.test_x.col(i)));

    DatasetSpec bad = small_spec(1);
    bad.d = 2;
    CHECK_THROWS_AS(gen_data(bad), std::invalid_argument);
    bad = small_spec(1, -1.0);
    CHECK_THROWS_AS(gen_data(bad), std::invalid_argument);

    // noise level: residual variance near 0.1
    DatasetSpec many = small_spec(6);
    many.m_train = 20000;
    const Dataset big = gen_data(many);
    double ss = 0.0;
    for (Eigen::Index i = 0; i < big.train_y.size(); ++i) ss += std::pow(big.train_y[i] - sinc(big.train_x(0, i)), 2);
    CHECK(ss / 20000 == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("baseline kernels and kernel choice") {
    Eigen::VectorXd x(2), y(2);
    x << 0.1, 0.2;
    y << -0.3, 0.5;
    const double dist2 = (x - y).squaredNorm();
    CHECK(GaussianKernel(2, 0.1)(x, y) == doctest::Approx(std::exp(-dist2 / 0.1)));
    CHECK(LaplacianKernel(2, 10.0)(x, y) == doctest::Approx(std::exp(-std::sqrt(dist2) / 10.0)));

    const KernelChoice g = KernelChoice::parse("gaussian:0.1");
    CHECK(g.kind == KernelChoice::Kind::gaussian);
    CHECK(g.param == 0.1);
    CHECK(g.label() == "gaussian:0.1");
    CHECK(KernelChoice::parse("laplacian:10").label() == "laplacian:10");
    CHECK(KernelChoice::parse("needlet:6").label() == "needlet:6");
    CHECK(KernelChoice::parse("needlet").param == 8.0);
    CHECK(KernelChoice::parse("needlet:3").make(2)->name() == "needlet");
    CHECK_THROWS_AS(KernelChoice::parse("needlet:2.5"), std::invalid_argument);
    CHECK_THROWS_AS(KernelChoice::parse("gaussian:0.1x"), std::invalid_argument);
    CHECK_THROWS_AS(KernelChoice::parse("cosine:1"), std::invalid_argument);
}

TEST_CASE("test error and sparsity") {
    const Dataset data = gen_data(small_spec(7, 0.0));
    const auto kernel = KernelChoice::parse("needlet:4").make(1);
    const LqProblem p(data.train_x, data.train_y, kernel, 1e-3, 2.0, 1.0);

    FitResult zero;
    zero.coeffs = Eigen::VectorXd::Zero(p.size());
    CHECK(sparsity_count(zero) == 0);
    const Eigen::VectorXd constant = Eigen::VectorXd::Constant(5, 0.7);
    CHECK(test_error(zero, p, data.test_x.leftCols(5), constant) == doctest::Approx(0.7));
    CHECK(test_error(zero, p, data.test_x.leftCols(1), Eigen::VectorXd::Constant(1, -0.3)) == doctest::Approx(0.3));
    CHECK_THROWS_AS(test_error(zero, p, Eigen::MatrixXd(1, 0), Eigen::VectorXd()), std::invalid_argument);

    const FitResult ridge = fit_problem(p);
    CHECK(ridge.solver_id == SolverId::ridge_closed_form);
    CHECK(sparsity_count(ridge) == p.size());
    const FitResult lasso = fit_problem(p.with_regularization(1e6, 1.0));
    CHECK(sparsity_count(lasso) == 0);

    // a perfect predictor: evaluate on the data it was built from
    const Eigen::VectorXd preds = predict_batch(ridge, p, data.test_x, false);
    CHECK(test_error(ridge, p, data.test_x, preds) == 0.0);

    // clamping to a bound that holds for the targets never hurts
    FitResult wild = ridge;
    wild.coeffs *= 50.0;
    CHECK(test_error(wild, p, data.test_x, data.test_y, 1.0) <= test_error(wild, p, data.test_x, data.test_y));
}

TEST_CASE("lambda sweep") {
    const Dataset data = gen_data(small_spec(8));
    const auto one = sweep_lambda(data, KernelChoice::parse("needlet:4"), {2.0}, {1e-2});
    REQUIRE(one.size() == 1);
    CHECK(one[0].status == "ok");
    CHECK(one[0].nnz == 40);
    CHECK(one[0].kernel == "needlet:4");

    SweepOptions opts;
    opts.threads = 3;
    const std::vector<double> lambdas{1e-3, 1e-2, -1.0};
    const auto rows = sweep_lambda(data, KernelChoice::parse("gaussian:0.1"), {1.0, 2.0}, lambdas, opts);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].q == 1.0);
    CHECK(rows[3].q == 2.0);
    CHECK(rows[4].lambda == 1e-2);
    CHECK(std::isnan(rows[2].test_rmse));
    CHECK(rows[2].status.find("lambda") != std::string::npos);
    CHECK(rows[4].nnz == 40);

    SweepOptions serial;
    const auto again = sweep_lambda(data, KernelChoice::parse("gaussian:0.1"), {1.0, 2.0}, lambdas, serial);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!std::isnan(rows[i].test_rmse)) CHECK(rows[i].test_rmse == again[i].test_rmse);
    }
    CHECK_THROWS_AS(sweep_lambda(data, KernelChoice::parse("needlet:4"), {}, {1.0}), std::invalid_argument);
}

TEST_CASE("band extraction on a hand-made grid") {
    PhaseGrid grid;
    grid.m_values = {10, 20};
    grid.eps_values = {1e-3, 1e-2, 1e-1, 1.0};
    grid.repeats = 10;
    grid.success.resize(2, 4);
    grid.success << 0.0, 0.2, 0.1, 1.0,  // non-monotone: pooled to 0.15
        0.0, 0.0, 0.0, 0.0;              // never succeeds
    smooth_and_band(grid);
    CHECK(grid.smoothed(0, 1) == doctest::Approx(0.15));
    CHECK(grid.smoothed(0, 2) == doctest::Approx(0.15));
    // first crossing of 0.1 between 1e-3 (0) and 1e-2 (0.15): log-interpolated
    REQUIRE(grid.bands[0].eps_low);
    CHECK(*grid.bands[0].eps_low == doctest::Approx(std::pow(10.0, -3.0 + 0.1 / 0.15)));
    REQUIRE(grid.bands[0].eps_high);
    CHECK(*grid.bands[0].eps_high == doctest::Approx(std::pow(10.0, -1.0 + 0.75 / 0.85)));
    CHECK(*grid.bands[0].width() > 0.0);
    CHECK(!grid.bands[1].eps_low);
    CHECK(!grid.bands[1].width());

    const auto ac = accuracy_confidence_curve(grid);
    REQUIRE(ac.size() == 8);
    CHECK(ac[3].failure == 0.0);
    CHECK(ac[1].failure == doctest::Approx(0.8));
    CHECK(ac[5].m == 20);
}

TEST_CASE("phase transition on a small grid") {
    PhaseConfig cfg;
    cfg.m_values = {10, 80};
    cfg.eps_values = {1e-3, 1e-2, 1e-1, 1.0};
    cfg.repeats = 6;
    cfg.m_test = 200;
    cfg.seed = 9;
    const PhaseGrid grid = phase_transition(cfg);
    CHECK(grid.success(1, 3) >= 0.9);
    CHECK(grid.success(0, 0) <= 0.1);
    for (Eigen::Index r = 0; r < 2; ++r) {
        for (Eigen::Index c = 0; c < 4; ++c) {
            CHECK(grid.success(r, c) >= 0.0);
            CHECK(grid.success(r, c) <= 1.0);
            if (c > 0) CHECK(grid.smoothed(r, c) >= grid.smoothed(r, c - 1));
        }
        if (grid.bands[r].eps_low && grid.bands[r].eps_high) CHECK(*grid.bands[r].eps_low <= *grid.bands[r].eps_high);
    }

    PhaseConfig threaded = cfg;
    threaded.threads = 3;
    CHECK(phase_transition(threaded).success == grid.success);

    PhaseConfig single = cfg;
    single.repeats = 1;
    single.m_values = {30};
    single.eps_values = {0.05};
    const double s = phase_transition(single).success(0, 0);
    CHECK((s == 0.0 || s == 1.0));
}

TEST_CASE("learning curve improves with more data") {
    LearningCurveConfig cfg;
    cfg.m_values = {16, 128};
    cfg.trials = 4;
    cfg.m_test = 200;
    cfg.lambda_grid = logspace(1e-6, 1.0, 7);
    const auto rows = learning_curve(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].median_rmse < rows[0].median_rmse);
}

#include "needlet_lq/csv.hpp"
#include "needlet_lq/parallel.hpp"
#include "needlet_lq/random.hpp"
#include "needlet_lq/stats.hpp"

#include <doctest.h>

#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

using namespace nlq;

TEST_CASE("format_double round-trips with 17 significant digits") {
    std::mt19937_64 rng(70);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        const std::string s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv writer layout") {
    std::ostringstream out;
    CsvWriter csv(out);
    csv.header({"a", "b", "c"});
    csv.row({std::string("x"), 0.5, 3LL});
    CHECK(out.str() == version_line() + "\na,b,c\nx,0.5,3\n");
    CHECK(version_line().rfind("# needlet-lq v", 0) == 0);

    std::ostringstream bare;
    CsvWriter plain(bare, false);
    plain.row({1.25});
    CHECK(bare.str() == "1.25\n");
}

TEST_CASE("read_samples") {
    std::istringstream in("# needlet-lq v0.1.0\nx_1,x_2,y\n0.1,0.2,1.5\n\n-0.3,0.4,-2\n");
    const SampleTable t = read_samples(in, 2);
    REQUIRE(t.targets.size() == 2);
    CHECK(t.points(1, 0) == 0.2);
    CHECK(t.points(0, 1) == -0.3);
    CHECK(t.targets[1] == -2.0);

    std::istringstream wrong_width("0.1,0.2\n");
    CHECK_THROWS_AS(read_samples(wrong_width, 2), std::runtime_error);
    std::istringstream garbage("x,y\n0.1,abc\n");
    CHECK_THROWS_AS(read_samples(garbage, 1), std::runtime_error);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(read_samples(empty, 1), std::runtime_error);
}

TEST_CASE("statistics helpers") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK_THROWS_AS(median({}), std::invalid_argument);

    const std::vector<double> v{10.0, 20.0, 20.0, 5.0};
    CHECK(ranks(v) == std::vector<double>{2.0, 3.5, 3.5, 1.0});

    const std::vector<double> x{1, 2, 3, 4, 5}, up{2, 4, 5, 8, 9}, down{9, 7, 6, 1, 0}, flat{1, 1, 1, 1, 1};
    CHECK(spearman(x, up) == doctest::Approx(1.0));
    CHECK(spearman(x, down) == doctest::Approx(-1.0));
    CHECK(spearman(x, flat) == 0.0);
    // textbook example with ties: Pearson correlation of the average ranks
    const std::vector<double> a{1, 2, 3, 4}, b{1, 3, 2, 2};
    CHECK(spearman(a, b) == doctest::Approx(0.3162277660168379).epsilon(1e-12));

    const std::vector<double> raw{0.0, 0.3, 0.2, 0.6, 0.5, 1.0};
    const auto iso = isotonic_increasing(raw);
    const std::vector<double> expected{0.0, 0.25, 0.25, 0.55, 0.55, 1.0};
    for (std::size_t i = 0; i < raw.size(); ++i) CHECK(iso[i] == doctest::Approx(expected[i]));

    const auto grid = logspace(1e-3, 1.0, 4);
    REQUIRE(grid.size() == 4);
    CHECK(grid.front() == 1e-3);
    CHECK(grid.back() == 1.0);
    CHECK(grid[1] == doctest::Approx(1e-2));
}

TEST_CASE("seeding and sampling") {
    CHECK(mix_seed(1, {2, 3}) == mix_seed(1, {2, 3}));
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 20; ++a)
        for (std::uint64_t b = 0; b < 20; ++b) seen.insert(mix_seed(7, {a, b}));
    CHECK(seen.size() == 400);
    CHECK(mix_seed(7, {1, 2}) != mix_seed(7, {2, 1}));

    Rng rng(5);
    const Eigen::MatrixXd ball = uniform_ball(3, 5000, rng);
    CHECK(ball.colwise().norm().maxCoeff() <= 1.0);
    // E|x|^2 = d / (d + 2) for the uniform ball
    CHECK(ball.colwise().squaredNorm().mean() == doctest::Approx(0.6).epsilon(0.03));
    const Eigen::MatrixXd sphere = uniform_sphere(4, 100, rng);
    for (Eigen::Index i = 0; i < sphere.cols(); ++i) CHECK(sphere.col(i).norm() == doctest::Approx(1.0));
    const Eigen::MatrixXd line = uniform_ball(1, 5000, rng);
    CHECK(line.cwiseAbs().maxCoeff() <= 1.0);
    CHECK(std::abs(line.mean()) < 0.05);

    Rng a(9), b(9);
    CHECK(uniform_ball(2, 10, a) == uniform_ball(2, 10, b));
}

TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hit(1000, 0);
    parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
    for (int h : hit) CHECK(h == 1);
    std::atomic<int> count{0};
    CHECK_THROWS_AS(parallel_for(100, 3,
                                 [&](std::size_t i) {
                                     ++count;
                                     if (i == 42) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
    parallel_for(0, 4, [&](std::size_t) { FAIL("no work expected"); });
}

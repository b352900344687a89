#include "needlet_lq/random.hpp"

#include <cmath>
#include <stdexcept>

namespace nlq {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t part : path) h = splitmix64(h ^ splitmix64(part + 0x632be59bd9b4e019ULL));
    return h;
}

Eigen::MatrixXd uniform_sphere(int d, Eigen::Index m, Rng& rng) {
    if (d < 1) throw std::invalid_argument("uniform_sphere: dimension must be >= 1");
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd out(d, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        double norm = 0.0;
        do {
            for (int k = 0; k < d; ++k) out(k, i) = normal(rng);
            norm = out.col(i).norm();
        } while (norm == 0.0);
        out.col(i) /= norm;
    }
    return out;
}

Eigen::MatrixXd uniform_ball(int d, Eigen::Index m, Rng& rng) {
    if (d < 1) throw std::invalid_argument("uniform_ball: dimension must be >= 1");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (d == 1) {
        Eigen::MatrixXd out(1, m);
        for (Eigen::Index i = 0; i < m; ++i) out(0, i) = 2.0 * unit(rng) - 1.0;
        return out;
    }
    Eigen::MatrixXd out = uniform_sphere(d, m, rng);
    for (Eigen::Index i = 0; i < m; ++i) out.col(i) *= std::pow(unit(rng), 1.0 / d);
    return out;
}

}  // namespace nlq

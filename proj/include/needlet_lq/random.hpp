#ifndef NEEDLET_LQ_RANDOM_HPP
#define NEEDLET_LQ_RANDOM_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <random>

namespace nlq {

using Rng = std::mt19937_64;

/// Deterministic seed derived from a base seed and a cell/trial path
/// (splitmix64 finaliser applied per component).
std::uint64_t mix_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// m points uniform in B^d, one per column.
Eigen::MatrixXd uniform_ball(int d, Eigen::Index m, Rng& rng);

/// m points uniform on S^{d-1} in R^d, one per column.
Eigen::MatrixXd uniform_sphere(int d, Eigen::Index m, Rng& rng);

}  // namespace nlq

#endif  // NEEDLET_LQ_RANDOM_HPP

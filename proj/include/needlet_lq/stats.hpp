#ifndef NEEDLET_LQ_STATS_HPP
#define NEEDLET_LQ_STATS_HPP

#include <span>
#include <vector>

namespace nlq {

double median(std::vector<double> values);

/// Average ranks (1-based), ties share their mean rank.
std::vector<double> ranks(std::span<const double> values);

/// Spearman rank correlation; 0 when either side has no spread.
double spearman(std::span<const double> x, std::span<const double> y);

/// Least-squares non-decreasing fit (pool adjacent violators).
std::vector<double> isotonic_increasing(std::span<const double> values, std::span<const double> weights = {});

/// n points geometrically spaced from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, int n);

}  // namespace nlq

#endif  // NEEDLET_LQ_STATS_HPP

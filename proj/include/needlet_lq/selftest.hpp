#ifndef NEEDLET_LQ_SELFTEST_HPP
#define NEEDLET_LQ_SELFTEST_HPP

#include <string>
#include <vector>

namespace nlq {

struct CheckResult {
    std::string module;
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
};

/// Quick invariant checks for every module (a few seconds in total).
std::vector<CheckResult> run_selftest(unsigned long long seed = 2024);

}  // namespace nlq

#endif  // NEEDLET_LQ_SELFTEST_HPP

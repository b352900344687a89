#include "needlet_lq/kernel.hpp"

namespace nlq {

Eigen::MatrixXd Kernel::cross(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const {
    Eigen::MatrixXd out(a.cols(), b.cols());
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        for (Eigen::Index j = 0; j < b.cols(); ++j) out(i, j) = (*this)(a.col(i), b.col(j));
    }
    return out;
}

Eigen::MatrixXd Kernel::gram(const Eigen::MatrixXd& points) const {
    const Eigen::Index m = points.cols();
    Eigen::MatrixXd out(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            out(i, j) = (*this)(points.col(i), points.col(j));
            out(j, i) = out(i, j);
        }
    }
    return out;
}

}  // namespace nlq

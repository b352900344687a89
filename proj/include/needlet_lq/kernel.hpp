#ifndef NEEDLET_LQ_KERNEL_HPP
#define NEEDLET_LQ_KERNEL_HPP

#include <Eigen/Dense>

#include <string>

namespace nlq {

using ConstPointRef = Eigen::Ref<const Eigen::VectorXd>;

/// Symmetric kernel on points of R^d. Point sets are d x N matrices, one
/// point per column.
class Kernel {
public:
    virtual ~Kernel() = default;

    virtual int dimension() const = 0;
    virtual std::string name() const = 0;
    virtual double operator()(const ConstPointRef& x, const ConstPointRef& y) const = 0;

    /// K(a_i, b_j) as an a.cols() x b.cols() matrix.
    virtual Eigen::MatrixXd cross(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const;

    /// Gram matrix K(x_i, x_j); symmetric by construction.
    virtual Eigen::MatrixXd gram(const Eigen::MatrixXd& points) const;
};

}  // namespace nlq

#endif  // NEEDLET_LQ_KERNEL_HPP

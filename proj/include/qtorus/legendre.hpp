#pragma once

// Discrete Legendre transform on regular grids and Monge-Ampere residuals.

#include "qtorus/execution.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

namespace qtorus {

/// Regular lattice in the box prod [lo_i, hi_i] with points_i >= 3 nodes per axis.
class Grid {
public:
    Grid(std::vector<double> lo, std::vector<double> hi, std::vector<std::size_t> points);

    std::size_t dim() const noexcept { return lo_.size(); }
    std::size_t size() const noexcept { return size_; }
    double spacing(std::size_t axis) const { return (hi_[axis] - lo_[axis]) / static_cast<double>(points_[axis] - 1); }
    std::size_t points(std::size_t axis) const { return points_[axis]; }

    std::vector<std::size_t> multi(std::size_t flat) const;
    std::size_t flat(const std::vector<std::size_t> &multi) const;
    Eigen::VectorXd point(std::size_t flat) const;
    /// At least one node away from every face.
    bool interior(std::size_t flat) const;

private:
    std::vector<double> lo_, hi_;
    std::vector<std::size_t> points_;
    std::size_t size_;
};

struct ConvexGridFunction {
    Grid grid;
    std::vector<double> values;

    static ConvexGridFunction sample(const Grid &grid, const std::function<double(const Eigen::VectorXd &)> &f);
};

/// Central differences at an interior node.
Eigen::VectorXd fd_gradient(const ConvexGridFunction &h, std::size_t flat);
Eigen::MatrixXd fd_hessian(const ConvexGridFunction &h, std::size_t flat);

/// max(0, -smallest eigenvalue of the difference Hessian) over interior nodes.
double convexity_defect(const ConvexGridFunction &h);

/// For each dual node y, the primal node maximizing <x, y> - H(x).
std::vector<std::size_t> conjugate_maximizers(const ConvexGridFunction &h, const Grid &dual,
                                              Execution ex = Execution::parallel);

/// H*(y) = max over primal nodes of <x, y> - H(x). Throws NonConvexInput when the
/// convexity defect exceeds the tolerance; a negative tolerance means
/// 1e-9 (1 + max |H|) / h_min^2, the rounding level of the difference Hessian.
ConvexGridFunction legendre_transform(const ConvexGridFunction &h, const Grid &dual, Execution ex = Execution::parallel,
                                      double convexity_tolerance = -1);

/// lambda_max / 2 * sum (h_i / 2)^2: the gap between the grid maximum and the
/// true supremum when the maximizer is inside the box and Hess H <= lambda_max.
double discretization_bound(double lambda_max, const Grid &grid);

/// max over interior nodes of |det(difference Hessian) - c|.
double monge_ampere_residual(const ConvexGridFunction &h, double c);

/// Subtracts H(0) + <grad H(0), x>; the origin must be an interior node.
ConvexGridFunction normalize_affine(const ConvexGridFunction &h);

struct DualityReport {
    /// Against c and 1/c when the constant is given.
    std::optional<double> primal_density_residual, dual_density_residual;
    double dual_density_bound;
    /// max ||Hess H*(y) Hess H(x_y) - I||_2 over interior dual nodes, x_y the maximizer.
    double hessian_pairing_defect, hessian_pairing_bound;
    /// max |grad H(x_y) - y|_2.
    double gradient_pairing_defect, gradient_pairing_bound;
};

/// lambda_min <= Hess H <= lambda_max; the bounds assume the maximizers of all dual
/// nodes are interior primal nodes.
DualityReport duality_volume_check(const ConvexGridFunction &h, const Grid &dual, std::optional<double> c,
                                   double lambda_max, double lambda_min, Execution ex = Execution::parallel);

} // namespace qtorus

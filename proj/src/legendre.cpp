#include "qtorus/legendre.hpp"
#include "qtorus/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qtorus {

Grid::Grid(std::vector<double> lo, std::vector<double> hi, std::vector<std::size_t> points)
    : lo_(std::move(lo)), hi_(std::move(hi)), points_(std::move(points)), size_(1) {
    if (lo_.empty() || lo_.size() != hi_.size() || lo_.size() != points_.size())
        throw Error(ErrorKind::InvalidArgument, "grid bounds and sizes must have the same positive length");
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        if (!(lo_[i] < hi_[i])) throw Error(ErrorKind::InvalidArgument, "empty grid axis");
        if (points_[i] < 3) throw Error(ErrorKind::InvalidArgument, "grid axis needs at least 3 nodes");
        size_ *= points_[i];
    }
}

std::vector<std::size_t> Grid::multi(std::size_t flat) const {
    std::vector<std::size_t> m(dim());
    for (std::size_t i = dim(); i-- > 0;) {
        m[i] = flat % points_[i];
        flat /= points_[i];
    }
    return m;
}

std::size_t Grid::flat(const std::vector<std::size_t> &multi) const {
    std::size_t f = 0;
    for (std::size_t i = 0; i < dim(); ++i) f = f * points_[i] + multi.at(i);
    return f;
}

Eigen::VectorXd Grid::point(std::size_t flat) const {
    const auto m = multi(flat);
    Eigen::VectorXd x(static_cast<Eigen::Index>(dim()));
    for (std::size_t i = 0; i < dim(); ++i) x(static_cast<Eigen::Index>(i)) = lo_[i] + static_cast<double>(m[i]) * spacing(i);
    return x;
}

bool Grid::interior(std::size_t flat) const {
    const auto m = multi(flat);
    for (std::size_t i = 0; i < dim(); ++i)
        if (m[i] == 0 || m[i] + 1 == points_[i]) return false;
    return true;
}

ConvexGridFunction ConvexGridFunction::sample(const Grid &grid, const std::function<double(const Eigen::VectorXd &)> &f) {
    ConvexGridFunction h{grid, std::vector<double>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) h.values[i] = f(grid.point(i));
    return h;
}

namespace {

// flat index of the node offset by steps along the given axes
std::size_t shifted(const Grid &g, std::size_t flat, std::size_t axis, long step) {
    auto m = g.multi(flat);
    m[axis] = static_cast<std::size_t>(static_cast<long>(m[axis]) + step);
    return g.flat(m);
}

void require_interior(const Grid &g, std::size_t flat) {
    if (!g.interior(flat)) throw Error(ErrorKind::InvalidArgument, "difference stencil needs an interior node");
}

double min_spacing(const Grid &g) {
    double h = g.spacing(0);
    for (std::size_t i = 1; i < g.dim(); ++i) h = std::min(h, g.spacing(i));
    return h;
}

} // namespace

Eigen::VectorXd fd_gradient(const ConvexGridFunction &h, std::size_t flat) {
    const Grid &g = h.grid;
    require_interior(g, flat);
    Eigen::VectorXd grad(static_cast<Eigen::Index>(g.dim()));
    for (std::size_t i = 0; i < g.dim(); ++i)
        grad(static_cast<Eigen::Index>(i)) =
            (h.values[shifted(g, flat, i, 1)] - h.values[shifted(g, flat, i, -1)]) / (2 * g.spacing(i));
    return grad;
}

Eigen::MatrixXd fd_hessian(const ConvexGridFunction &h, std::size_t flat) {
    const Grid &g = h.grid;
    require_interior(g, flat);
    const auto n = static_cast<Eigen::Index>(g.dim());
    Eigen::MatrixXd hess(n, n);
    for (std::size_t i = 0; i < g.dim(); ++i) {
        const double hi = g.spacing(i);
        hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
            (h.values[shifted(g, flat, i, 1)] - 2 * h.values[flat] + h.values[shifted(g, flat, i, -1)]) / (hi * hi);
        for (std::size_t j = i + 1; j < g.dim(); ++j) {
            auto at = [&](long a, long b) { return h.values[shifted(g, shifted(g, flat, i, a), j, b)]; };
            const double mixed = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * hi * g.spacing(j));
            hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mixed;
            hess(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = mixed;
        }
    }
    return hess;
}

double convexity_defect(const ConvexGridFunction &h) {
    double defect = 0;
    for (std::size_t i = 0; i < h.grid.size(); ++i) {
        if (!h.grid.interior(i)) continue;
        const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(fd_hessian(h, i)).eigenvalues().minCoeff();
        defect = std::max(defect, -lo);
    }
    return defect;
}

std::vector<std::size_t> conjugate_maximizers(const ConvexGridFunction &h, const Grid &dual, Execution ex) {
    const Grid &g = h.grid;
    if (g.dim() != dual.dim()) throw Error(ErrorKind::InvalidArgument, "primal and dual grids differ in dimension");
    const auto n = static_cast<Eigen::Index>(g.dim());
    Eigen::MatrixXd nodes(n, static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) nodes.col(static_cast<Eigen::Index>(i)) = g.point(i);
    std::vector<std::size_t> arg(dual.size());
    auto best = [&](std::size_t k) {
        const Eigen::VectorXd y = dual.point(k);
        double top = -std::numeric_limits<double>::infinity();
        std::size_t at = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double v = nodes.col(static_cast<Eigen::Index>(i)).dot(y) - h.values[i];
            if (v > top) {
                top = v;
                at = i;
            }
        }
        arg[k] = at;
    };
    const auto m = static_cast<long>(dual.size());
    if (ex == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (long k = 0; k < m; ++k) best(static_cast<std::size_t>(k));
    } else {
        for (long k = 0; k < m; ++k) best(static_cast<std::size_t>(k));
    }
    return arg;
}

ConvexGridFunction legendre_transform(const ConvexGridFunction &h, const Grid &dual, Execution ex,
                                      double convexity_tolerance) {
    if (convexity_tolerance < 0) {
        double scale = 0;
        for (double v : h.values) scale = std::max(scale, std::abs(v));
        const double hmin = min_spacing(h.grid);
        convexity_tolerance = 1e-9 * (1 + scale) / (hmin * hmin);
    }
    const double defect = convexity_defect(h);
    if (defect > convexity_tolerance)
        throw Error(ErrorKind::NonConvexInput,
                    "difference Hessian has eigenvalue " + std::to_string(-defect) + " below the tolerance");
    const auto arg = conjugate_maximizers(h, dual, ex);
    ConvexGridFunction out{dual, std::vector<double>(dual.size())};
    for (std::size_t k = 0; k < dual.size(); ++k) out.values[k] = h.grid.point(arg[k]).dot(dual.point(k)) - h.values[arg[k]];
    return out;
}

double discretization_bound(double lambda_max, const Grid &grid) {
    double s = 0;
    for (std::size_t i = 0; i < grid.dim(); ++i) s += std::pow(grid.spacing(i) / 2, 2);
    return 0.5 * lambda_max * s;
}

double monge_ampere_residual(const ConvexGridFunction &h, double c) {
    double worst = -1;
    for (std::size_t i = 0; i < h.grid.size(); ++i)
        if (h.grid.interior(i)) worst = std::max(worst, std::abs(fd_hessian(h, i).determinant() - c));
    if (worst < 0) throw Error(ErrorKind::InvalidArgument, "grid has no interior nodes");
    return worst;
}

ConvexGridFunction normalize_affine(const ConvexGridFunction &h) {
    const Grid &g = h.grid;
    std::vector<std::size_t> m(g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) {
        const double lo = g.point(0)(static_cast<Eigen::Index>(i));
        const double r = -lo / g.spacing(i);
        m[i] = static_cast<std::size_t>(std::lround(r));
        if (std::abs(r - std::round(r)) > 1e-9) throw Error(ErrorKind::InvalidArgument, "origin is not a grid node");
    }
    const std::size_t origin = g.flat(m);
    if (!g.interior(origin)) throw Error(ErrorKind::InvalidArgument, "origin is not an interior node");
    const double h0 = h.values[origin];
    const Eigen::VectorXd grad = fd_gradient(h, origin);
    ConvexGridFunction out = h;
    for (std::size_t i = 0; i < g.size(); ++i) out.values[i] -= h0 + grad.dot(g.point(i));
    out.values[origin] = 0;
    return out;
}

DualityReport duality_volume_check(const ConvexGridFunction &h, const Grid &dual, std::optional<double> c,
                                   double lambda_max, double lambda_min, Execution ex) {
    const auto arg = conjugate_maximizers(h, dual, ex);
    ConvexGridFunction star{dual, std::vector<double>(dual.size())};
    for (std::size_t k = 0; k < dual.size(); ++k) star.values[k] = h.grid.point(arg[k]).dot(dual.point(k)) - h.values[arg[k]];

    const std::size_t n = dual.dim();
    const double ep = discretization_bound(lambda_max, h.grid);
    // entrywise error of the difference Hessian of H*: 4 e / k_i^2 diagonal, e / k_i k_j mixed
    double frob = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            frob += std::pow((i == j ? 4 : 1) * ep / (dual.spacing(i) * dual.spacing(j)), 2);
    frob = std::sqrt(frob);

    DualityReport r{};
    r.hessian_pairing_bound = frob * lambda_max;
    r.dual_density_bound = static_cast<double>(n) * frob * std::pow(1 / lambda_min + frob, static_cast<double>(n) - 1);
    r.gradient_pairing_bound = lambda_max * std::sqrt(2 * ep / lambda_min) + 1e-12;
    if (c) {
        r.primal_density_residual = monge_ampere_residual(h, *c);
        r.dual_density_residual = monge_ampere_residual(star, 1 / *c);
    }
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < dual.size(); ++k) {
        if (!dual.interior(k) || !h.grid.interior(arg[k])) continue;
        const Eigen::MatrixXd prod = fd_hessian(star, k) * fd_hessian(h, arg[k]);
        r.hessian_pairing_defect = std::max(r.hessian_pairing_defect, (prod - id).operatorNorm());
        r.gradient_pairing_defect = std::max(r.gradient_pairing_defect, (fd_gradient(h, arg[k]) - dual.point(k)).norm());
    }
    return r;
}

} // namespace qtorus

#include "qtorus/theta.hpp"

#include <Eigen/Eigenvalues>

#include <numbers>
#include <omp.h>

namespace qtorus {

ThetaParams::ThetaParams(Matrix<GaussianRational> omega_, std::vector<Rational> l_, SkewForm phi_)
    : omega(std::move(omega_)), l(std::move(l_)), phi(std::move(phi_)) {
    const std::size_t d = phi.dim();
    if (omega.rows() != d || omega.cols() != d || l.size() != d)
        throw Error(ErrorKind::InvalidArgument, "Omega, l and phi must have matching rank");
    Matrix<Rational> imag(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            if (!(omega(i, j) == omega(j, i))) throw Error(ErrorKind::InvalidArgument, "Omega must be symmetric");
            imag(i, j) = omega(i, j).im;
        }
    // Sylvester: all leading principal minors positive
    for (std::size_t k = 1; k <= d; ++k)
        if (imag.block(0, 0, k, k).determinant() <= 0)
            throw Error(ErrorKind::DivergentParameters, "Im Omega is not positive-definite");
}

GaussianRational omega_pairing(const ThetaParams &p, const LatticeVector &x, const LatticeVector &y) {
    GaussianRational s;
    for (std::size_t i = 0; i < p.dim(); ++i)
        for (std::size_t j = 0; j < p.dim(); ++j) {
            if (x[i] == 0 || y[j] == 0) continue;
            s += p.omega(i, j) * GaussianRational(Rational(x[i] * y[j]));
        }
    return s;
}

GaussianRational quadratic(const ThetaParams &p, const LatticeVector &a) {
    return omega_pairing(p, a, a) * GaussianRational(Rational(1, 2));
}

Rational linear(const ThetaParams &p, const LatticeVector &a) {
    Rational s = 0;
    for (std::size_t i = 0; i < p.dim(); ++i) s += p.l[i] * a[i];
    return s;
}

GaussianRational theta_exponent(const ThetaParams &p, const LatticeVector &a) {
    return quadratic(p, a) + GaussianRational(linear(p, a));
}

Real min_imaginary_eigenvalue(const ThetaParams &p) {
    const auto d = static_cast<Eigen::Index>(p.dim());
    Eigen::MatrixXd y(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) y(i, j) = static_cast<double>(to_real(p.omega(i, j).im));
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(y, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

ThetaSeries theta_series(const ThetaParams &params, std::int64_t radius, Execution execution) {
    if (radius < 0) throw Error(ErrorKind::InvalidArgument, "radius must be non-negative");
    const auto points = lattice_ball(params.dim(), radius);
    std::vector<Complex> values(points.size());
#pragma omp parallel for if (execution == Execution::parallel)
    for (std::size_t k = 0; k < points.size(); ++k) values[k] = exp_2pi_i(theta_exponent(params, points[k]));
    NumericElement element(params.phi);
    for (std::size_t k = 0; k < points.size(); ++k) element.add_term(points[k], values[k]);
    // |coef(a)| = exp(-pi (a, Im Omega a)) <= prod_i exp(-pi qmin a_i^2)
    // shaved so eigensolver rounding cannot make the bound optimistic
    const Real qmin = min_imaginary_eigenvalue(params) * (1 - 1e-9L);
    const Real tail = gaussian_tail_bound(params.dim(), std::numbers::pi_v<Real> * qmin, radius);
    return {params, radius, std::move(element), tail};
}

GaussianRational t_xi_exponent(const ThetaParams &p, const LatticeVector &xi, const LatticeVector &a) {
    return -omega_pairing(p, a, xi) + GaussianRational(p.phi(a, xi));
}

NumericElement t_xi(const LatticeVector &xi, const NumericElement &x, const ThetaParams &params) {
    if (!(x.phi() == params.phi)) throw Error(ErrorKind::ParameterMismatch, "element and theta parameters differ in phi");
    if (xi.size() != params.dim()) throw Error(ErrorKind::InvalidArgument, "xi has wrong rank");
    NumericElement out(params.phi);
    for (const auto &[a, c] : x.terms()) out.add_term(a, exp_2pi_i(t_xi_exponent(params, xi, a)) * c);
    return out;
}

std::string to_string(ThetaConvention c) {
    switch (c) {
    case ThetaConvention::full_left: return "full-form/left";
    case ThetaConvention::full_right: return "full-form/right";
    case ThetaConvention::half_left: return "half-form/left";
    case ThetaConvention::half_right: return "half-form/right";
    }
    return "?";
}

namespace {

bool is_integer(const GaussianRational &z) { return z.im == 0 && z.re.get_den() == 1; }

void check_window(const LatticeVector &xi, std::int64_t radius) {
    if (radius <= sup_norm(xi)) throw Error(ErrorKind::WindowEmpty, "radius must exceed |xi|_inf");
}

} // namespace

std::vector<ThetaConvention> closing_conventions(const ThetaParams &params, const LatticeVector &xi,
                                                 std::int64_t radius) {
    check_window(xi, radius);
    std::vector<ThetaConvention> closing;
    for (auto conv : {ThetaConvention::full_left, ThetaConvention::full_right, ThetaConvention::half_left,
                      ThetaConvention::half_right}) {
        const bool half = conv == ThetaConvention::half_left || conv == ThetaConvention::half_right;
        const bool right = conv == ThetaConvention::full_right || conv == ThetaConvention::half_right;
        auto q = [&](const LatticeVector &a) {
            return half ? quadratic(params, a) : omega_pairing(params, a, a);
        };
        auto coefficient = [&](const LatticeVector &a) { return q(a) + GaussianRational(linear(params, a)); };
        const GaussianRational prefactor = -(q(xi) - GaussianRational(linear(params, xi)));
        bool ok = true;
        for (const auto &b : lattice_ball(params.dim(), radius - sup_norm(xi))) {
            const auto a = b - xi;
            const GaussianRational lhs = coefficient(b) + t_xi_exponent(params, xi, b);
            const Rational cocycle_phase = right ? params.phi(a, xi) : params.phi(xi, a);
            const GaussianRational rhs = prefactor + coefficient(a) + GaussianRational(cocycle_phase);
            if (!is_integer(lhs - rhs)) {
                ok = false;
                break;
            }
        }
        if (ok) closing.push_back(conv);
    }
    return closing;
}

TransformationReport verify_transformation_law(const ThetaParams &params, const LatticeVector &xi,
                                               std::int64_t radius) {
    check_window(xi, radius);
    const auto theta = theta_series(params, radius);
    const auto lhs = t_xi(xi, theta.element, params);
    const Complex scalar = exp_2pi_i(-(quadratic(params, xi) - GaussianRational(linear(params, xi))));
    const auto rhs = multiply(theta.element, NumericElement::generator(params.phi, xi)).scaled(scalar);
    TransformationReport report{kThetaConvention, radius - sup_norm(xi), 0, 0, theta.tail_bound};
    for (const auto &b : lattice_ball(params.dim(), report.window)) {
        const Complex r = rhs.coefficient(b);
        const Real diff = std::abs(lhs.coefficient(b) - r);
        report.max_absolute = std::max(report.max_absolute, diff);
        report.max_discrepancy = std::max(report.max_discrepancy, diff / std::max<Real>(1, std::abs(r)));
    }
    return report;
}

} // namespace qtorus

#pragma once

// Quantum theta functions theta = sum_a exp(2 pi i (Q(a) + l(a))) e(a) and the
// quasi-periodicity law under the diagonal automorphisms t_xi.
//
// Exponents are kept as exact Gaussian rationals (the coefficient of 2 pi i),
// so convention checks are symbolic and only the final exp() is floating point.

#include "qtorus/algebra.hpp"

#include <optional>
#include <string>

namespace qtorus {

struct ThetaParams {
    ThetaParams(Matrix<GaussianRational> omega, std::vector<Rational> l, SkewForm phi);

    std::size_t dim() const noexcept { return phi.dim(); }

    Matrix<GaussianRational> omega;
    std::vector<Rational> l;
    SkewForm phi;
};

/// (x, Omega y) with the standard dot product.
GaussianRational omega_pairing(const ThetaParams &p, const LatticeVector &x, const LatticeVector &y);
/// Q(a) = 1/2 (Omega a, a).
GaussianRational quadratic(const ThetaParams &p, const LatticeVector &a);
Rational linear(const ThetaParams &p, const LatticeVector &a);
/// Q(a) + l(a).
GaussianRational theta_exponent(const ThetaParams &p, const LatticeVector &a);

/// Smallest eigenvalue of Im Omega.
Real min_imaginary_eigenvalue(const ThetaParams &p);

struct ThetaSeries {
    ThetaParams params;
    std::int64_t radius;
    NumericElement element;
    /// Bound on sum_{|a|_inf > radius} |coef(a)|.
    Real tail_bound;
};

ThetaSeries theta_series(const ThetaParams &params, std::int64_t radius, Execution execution = Execution::parallel);

/// t_xi(e(a)) = exp(2 pi i (-(a, Omega xi) + phi(a, xi))) e(a), as a 2 pi i exponent.
GaussianRational t_xi_exponent(const ThetaParams &p, const LatticeVector &xi, const LatticeVector &a);
NumericElement t_xi(const LatticeVector &xi, const NumericElement &x, const ThetaParams &params);

enum class ThetaConvention { full_left, full_right, half_left, half_right };
std::string to_string(ThetaConvention c);

/// The convention under which the law closes (established by `closing_conventions`).
inline constexpr ThetaConvention kThetaConvention = ThetaConvention::half_right;

/// Symbolic comparison on the window: returns the conventions for which every
/// coefficient exponent of both sides agrees modulo integers.
std::vector<ThetaConvention> closing_conventions(const ThetaParams &params, const LatticeVector &xi,
                                                 std::int64_t radius);

struct TransformationReport {
    ThetaConvention convention;
    std::int64_t window;
    /// max over the window of |lhs - rhs| / max(1, |rhs|).
    Real max_discrepancy;
    Real max_absolute;
    Real tail_bound;
};

/// Compares t_xi(theta) with exp(-2 pi i (Q(xi) - l(xi))) theta e(xi) on
/// {|b|_inf <= radius - |xi|_inf}. Throws WindowEmpty if that set is empty.
TransformationReport verify_transformation_law(const ThetaParams &params, const LatticeVector &xi,
                                               std::int64_t radius);

} // namespace qtorus

#pragma once

// Cyclic Weyl-algebra modules W = A / A(l - lambda), l = alpha p + beta q, and
// their Ext groups, truncated at a polynomial cutoff.
//
// With c = (beta p - alpha q) / (alpha^2 + beta^2) we have [l, c] = -hbar, so
// W has PBW basis c^k and l c^k = c^k l - k hbar c^{k-1}, i.e. l acts on c^k
// by lambda c^k - k hbar c^{k-1}. Inverting,
//   p = (alpha / s) l + beta c,   q = (beta / s) l - alpha c,   s = alpha^2 + beta^2.

#include "qtorus/matrix.hpp"
#include "qtorus/rational.hpp"

namespace qtorus {

struct WeylLine {
    /// {alpha p + beta q = offset}; rescaled so max(|alpha|, |beta|) = 1.
    WeylLine(Rational alpha, Rational beta, Rational offset = 0);

    Rational alpha, beta, offset;
};

struct TruncatedCyclicModule {
    WeylLine line;
    std::size_t cutoff;
    Rational hbar;
    /// On the basis c^0 .. c^N.
    Matrix<Rational> l, c, p, q;

    /// [P, Q] - hbar I restricted to the interior block 0..N-1.
    Matrix<Rational> interior_commutator_defect() const;
};

/// Requires cutoff >= 2.
TruncatedCyclicModule module_of_line(const WeylLine &line, std::size_t cutoff, const Rational &hbar);

struct ExtAtCutoff {
    std::size_t cutoff;
    std::size_t ext0, ext1;
    /// Exact rank of the truncated operator.
    std::size_t rank;
    /// Rank by singular values against 1e-8 times the largest one.
    std::size_t numerical_rank;
    double smallest_nonzero_singular_value;
};

struct ExtReport {
    std::size_t ext0, ext1;
    bool stabilized;
    ExtAtCutoff at_n, at_2n;
};

/// Ext^*(W1, W2) as kernel and cokernel of (l1 - lambda1) acting on W2. Throws
/// NonTransversal for parallel distinct lines and NotStabilized when the cutoffs
/// N and 2N disagree.
ExtReport ext_dims(const WeylLine &l1, const WeylLine &l2, std::size_t cutoff, const Rational &hbar);

ExtAtCutoff ext_at_cutoff(const WeylLine &l1, const WeylLine &l2, std::size_t cutoff, const Rational &hbar);

} // namespace qtorus

#pragma once

// Arithmetic in the coordinate ring of a quantum torus T(L, alpha) with
// alpha(m, n) = exp(2 pi i phi(m, n)), and radius truncations of the smooth
// algebra B_phi.
//
// Elements are finite sums  sum_n a_n e(n)  with  e(m) e(n) = alpha(m, n) e(m + n).
// Two coefficient rings are supported:
//   Cyclotomic  exact finite sums of rational multiples of roots of unity
//   Complex     long double complex numbers
// In both, the cocycle is evaluated through PhaseRational, so for rational
// phi the phase bookkeeping is exact.

#include "qtorus/execution.hpp"
#include "qtorus/lattice.hpp"
#include "qtorus/rational.hpp"

#include <array>
#include <cmath>
#include <map>
#include <vector>

namespace qtorus {

/// A rational reduced mod 1, standing for exp(2 pi i value).
class PhaseRational {
public:
    PhaseRational() = default;
    explicit PhaseRational(const Rational &value) : value_(frac(value)) {}

    const Rational &value() const noexcept { return value_; }
    Complex to_complex() const;

    friend PhaseRational operator+(const PhaseRational &a, const PhaseRational &b) {
        return PhaseRational(a.value_ + b.value_);
    }
    friend PhaseRational operator-(const PhaseRational &a) { return PhaseRational(-a.value_); }
    friend bool operator==(const PhaseRational &a, const PhaseRational &b) { return a.value_ == b.value_; }
    friend bool operator<(const PhaseRational &a, const PhaseRational &b) { return a.value_ < b.value_; }

private:
    Rational value_ = 0;
};

/// Element of the group ring Q[Q/Z]: sum_k r_k exp(2 pi i v_k). Equality is
/// formal (as group-ring elements), which implies equality of the complex values.
class Cyclotomic {
public:
    Cyclotomic() = default;
    Cyclotomic(long value) : Cyclotomic(Rational(value)) {}
    Cyclotomic(const Rational &value);
    Cyclotomic(const Rational &coefficient, const PhaseRational &phase);

    static Cyclotomic phase(const PhaseRational &p) { return Cyclotomic(Rational(1), p); }

    const std::map<Rational, Rational> &terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Single term r exp(2 pi i v).
    bool is_monomial() const noexcept { return terms_.size() == 1; }

    Cyclotomic conj() const;
    /// Inverse of a monomial; throws for anything else.
    Cyclotomic inverse() const;
    Complex to_complex() const;
    /// sum |r_k|, an upper bound on the modulus.
    Real magnitude_bound() const;

    Cyclotomic &operator+=(const Cyclotomic &o);
    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic &b) { return a += b; }
    friend Cyclotomic operator-(const Cyclotomic &a);
    friend Cyclotomic operator-(const Cyclotomic &a, const Cyclotomic &b) { return a + (-b); }
    friend Cyclotomic operator*(const Cyclotomic &a, const Cyclotomic &b);
    friend bool operator==(const Cyclotomic &a, const Cyclotomic &b) { return a.terms_ == b.terms_; }

private:
    void add(const Rational &phase, const Rational &coefficient);
    std::map<Rational, Rational> terms_; // phase in [0,1) -> nonzero coefficient
};

std::string to_string(const Cyclotomic &c);

template <class C>
struct CoefficientTraits;

template <>
struct CoefficientTraits<Cyclotomic> {
    static Cyclotomic one() { return Cyclotomic(1); }
    static Cyclotomic phase(const PhaseRational &p) { return Cyclotomic::phase(p); }
    static bool is_zero(const Cyclotomic &c) { return c.is_zero(); }
    static Cyclotomic conj(const Cyclotomic &c) { return c.conj(); }
    static Cyclotomic inverse(const Cyclotomic &c) { return c.inverse(); }
    static Real magnitude(const Cyclotomic &c) { return c.magnitude_bound(); }
    static Complex to_complex(const Cyclotomic &c) { return c.to_complex(); }
};

template <>
struct CoefficientTraits<Complex> {
    static Complex one() { return Complex(1); }
    static Complex phase(const PhaseRational &p) { return p.to_complex(); }
    static bool is_zero(const Complex &c) { return c == Complex(0); }
    static Complex conj(const Complex &c) { return std::conj(c); }
    static Complex inverse(const Complex &c) { return Complex(1) / c; }
    static Real magnitude(const Complex &c) { return std::abs(c); }
    static Complex to_complex(const Complex &c) { return c; }
};

struct LatticeLess {
    bool operator()(const LatticeVector &a, const LatticeVector &b) const { return a < b; }
};

/// alpha(m, n) as an exact phase.
inline PhaseRational cocycle(const SkewForm &phi, const LatticeVector &m, const LatticeVector &n) {
    return PhaseRational(phi(m, n));
}

template <class C>
class QTorusElement {
public:
    using Coefficient = C;
    using Traits = CoefficientTraits<C>;
    using TermMap = std::map<LatticeVector, C, LatticeLess>;

    QTorusElement() = default;
    explicit QTorusElement(SkewForm phi) : phi_(std::move(phi)) {}

    /// coefficient * e(n)
    static QTorusElement generator(SkewForm phi, LatticeVector n, C coefficient = Traits::one()) {
        QTorusElement x(std::move(phi));
        x.add_term(n, coefficient);
        return x;
    }

    static QTorusElement unit(SkewForm phi) {
        const auto d = phi.dim();
        return generator(std::move(phi), LatticeVector(d, 0));
    }

    const SkewForm &phi() const noexcept { return phi_; }
    std::size_t dim() const noexcept { return phi_.dim(); }
    const TermMap &terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    void add_term(const LatticeVector &n, const C &coefficient) {
        if (n.size() != dim()) throw Error(ErrorKind::InvalidArgument, "lattice vector has wrong rank");
        if (Traits::is_zero(coefficient)) return;
        auto [it, inserted] = terms_.try_emplace(n, coefficient);
        if (!inserted) {
            it->second = it->second + coefficient;
            if (Traits::is_zero(it->second)) terms_.erase(it);
        }
    }

    C coefficient(const LatticeVector &n) const {
        auto it = terms_.find(n);
        return it == terms_.end() ? C(0) : it->second;
    }

    std::int64_t support_radius() const {
        std::int64_t r = 0;
        for (const auto &[n, c] : terms_) r = std::max(r, sup_norm(n));
        return r;
    }

    friend QTorusElement operator+(const QTorusElement &a, const QTorusElement &b) {
        require_same_phi(a, b);
        QTorusElement out = a;
        for (const auto &[n, c] : b.terms_) out.add_term(n, c);
        return out;
    }

    QTorusElement scaled(const C &s) const {
        QTorusElement out(phi_);
        for (const auto &[n, c] : terms_) out.add_term(n, s * c);
        return out;
    }

    friend bool operator==(const QTorusElement &a, const QTorusElement &b) {
        return a.phi_ == b.phi_ && a.terms_ == b.terms_;
    }

    static void require_same_phi(const QTorusElement &a, const QTorusElement &b) {
        if (!(a.phi_ == b.phi_)) throw Error(ErrorKind::ParameterMismatch, "elements live over different phi");
    }

private:
    SkewForm phi_;
    TermMap terms_;
};

using ExactElement = QTorusElement<Cyclotomic>;
using NumericElement = QTorusElement<Complex>;

/// Bilinear extension of e(m) e(n) = alpha(m, n) e(m + n).
template <class C>
QTorusElement<C> multiply(const QTorusElement<C> &x, const QTorusElement<C> &y,
                          Execution execution = Execution::serial);

/// e(m)^* = e(-m), coefficients conjugated.
template <class C>
QTorusElement<C> star(const QTorusElement<C> &x) {
    QTorusElement<C> out(x.phi());
    for (const auto &[n, c] : x.terms()) out.add_term(-n, CoefficientTraits<C>::conj(c));
    return out;
}

/// Symmetric-convention SL(2,Z) action e(m) -> e(g m) on a rank-2 torus.
/// Throws NotAnAutomorphism unless det g = 1.
template <class C>
QTorusElement<C> sl2z_automorphism(const std::array<std::int64_t, 4> &g, const QTorusElement<C> &x) {
    if (x.dim() != 2) throw Error(ErrorKind::InvalidArgument, "SL(2,Z) action needs a rank-2 torus");
    if (g[0] * g[3] - g[1] * g[2] != 1)
        throw Error(ErrorKind::NotAnAutomorphism, "ad - bc != 1 does not preserve the cocycle");
    QTorusElement<C> out(x.phi());
    for (const auto &[m, c] : x.terms()) out.add_term({g[0] * m[0] + g[1] * m[1], g[2] * m[0] + g[3] * m[1]}, c);
    return out;
}

/// A character t in Hom(L, C^*), given on basis vectors.
template <class C>
class PointAutomorphism {
public:
    explicit PointAutomorphism(std::vector<C> on_basis) : values_(std::move(on_basis)) {
        for (const auto &v : values_) {
            if (CoefficientTraits<C>::is_zero(v)) throw Error(ErrorKind::InvalidArgument, "character value is zero");
            inverses_.push_back(CoefficientTraits<C>::inverse(v));
        }
    }

    std::size_t dim() const noexcept { return values_.size(); }

    /// t(n) = prod_i t(e_i)^{n_i}
    C operator()(const LatticeVector &n) const {
        C out = CoefficientTraits<C>::one();
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const C &base = n[i] >= 0 ? values_[i] : inverses_[i];
            for (std::int64_t k = 0; k < (n[i] >= 0 ? n[i] : -n[i]); ++k) out = out * base;
        }
        return out;
    }

    bool unitary(Real tolerance = 1e-15L) const {
        for (const auto &v : values_) {
            const Complex z = CoefficientTraits<C>::to_complex(v);
            if (std::abs(std::abs(z) - 1) > tolerance) return false;
        }
        return true;
    }

private:
    std::vector<C> values_;
    std::vector<C> inverses_;
};

/// t^*(e(a)) = t(a) e(a)
template <class C>
QTorusElement<C> apply_point_automorphism(const PointAutomorphism<C> &t, const QTorusElement<C> &x) {
    if (t.dim() != x.dim()) throw Error(ErrorKind::InvalidArgument, "character rank mismatch");
    QTorusElement<C> out(x.phi());
    for (const auto &[n, c] : x.terms()) out.add_term(n, t(n) * c);
    return out;
}

/// Drops terms with |n|_inf > radius.
template <class C>
QTorusElement<C> smooth_truncate(const QTorusElement<C> &x, std::int64_t radius) {
    QTorusElement<C> out(x.phi());
    for (const auto &[n, c] : x.terms())
        if (sup_norm(n) <= radius) out.add_term(n, c);
    return out;
}

/// sum_n |a_n|, which bounds the operator norm in any unitary representation.
template <class C>
Real sup_norm_bound(const QTorusElement<C> &x) {
    Real s = 0;
    for (const auto &[n, c] : x.terms()) s += CoefficientTraits<C>::magnitude(c);
    return s;
}

/// Upper bound on sum over |n|_inf > radius of exp(-decay |n|_2^2) in Z^d;
/// the certificate attached to a radius truncation of a Gaussian-decay element.
Real gaussian_tail_bound(std::size_t d, Real decay, std::int64_t radius);

NumericElement to_numeric(const ExactElement &x);

extern template QTorusElement<Cyclotomic> multiply(const QTorusElement<Cyclotomic> &, const QTorusElement<Cyclotomic> &,
                                                   Execution);
extern template QTorusElement<Complex> multiply(const QTorusElement<Complex> &, const QTorusElement<Complex> &,
                                                Execution);

} // namespace qtorus

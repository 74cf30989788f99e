#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qtorus {

using Rational = mpq_class;
using Integer = mpz_class;
using Real = long double;
using Complex = std::complex<Real>;

/// Parses "p/q", an integer, or a decimal literal ("0.25", "-1.5e-3") exactly.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational &value);

/// Decimal rendering with `digits` significant digits.
std::string to_decimal(Real value, int digits);

/// Parses a decimal real at full long double precision.
Real parse_real(std::string_view text);

/// Parses "a+bi", "a-bi", "bi", "a" into a complex number.
Complex parse_complex(std::string_view text);

Real to_real(const Rational &value);

/// Representative of value mod 1 in [0, 1).
Rational frac(const Rational &value);

Integer floor(const Rational &value);

/// Best rational approximation with denominator at most `max_den`.
Rational approximate(Real value, long max_den);

/// Exact complex rational a + b i.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    friend GaussianRational operator+(const GaussianRational &a, const GaussianRational &b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational &a, const GaussianRational &b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational &a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational &a, const GaussianRational &b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussianRational &a, const GaussianRational &b) {
        return a.re == b.re && a.im == b.im;
    }
    GaussianRational &operator+=(const GaussianRational &o) { return *this = *this + o; }

    Complex to_complex() const { return {to_real(re), to_real(im)}; }
};

std::string to_string(const GaussianRational &value);

/// Parses "a+bi" with exact rational parts.
GaussianRational parse_gaussian(std::string_view text);

/// exp(2 pi i z) evaluated with the real part reduced exactly mod 1 first.
Complex exp_2pi_i(const GaussianRational &z);

using LatticeVector = std::vector<std::int64_t>;

std::int64_t sup_norm(const LatticeVector &v);

LatticeVector operator+(const LatticeVector &a, const LatticeVector &b);
LatticeVector operator-(const LatticeVector &a, const LatticeVector &b);
LatticeVector operator-(const LatticeVector &a);

/// All lattice points with |a|_inf <= radius, in lexicographic order.
std::vector<LatticeVector> lattice_ball(std::size_t d, std::int64_t radius);

} // namespace qtorus

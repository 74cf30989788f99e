#include "qtorus/rational.hpp"
#include "qtorus/error.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace qtorus {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularGraphImage: return "SingularGraphImage";
    case ErrorKind::ParameterMismatch: return "ParameterMismatch";
    case ErrorKind::NotAnAutomorphism: return "NotAnAutomorphism";
    case ErrorKind::DivergentParameters: return "DivergentParameters";
    case ErrorKind::WindowEmpty: return "WindowEmpty";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::NotTransversal: return "NotTransversal";
    case ErrorKind::SingularMonodromy: return "SingularMonodromy";
    case ErrorKind::NotFlat: return "NotFlat";
    case ErrorKind::NoGaugeFound: return "NoGaugeFound";
    case ErrorKind::NotStabilized: return "NotStabilized";
    case ErrorKind::NonTransversal: return "NonTransversal";
    case ErrorKind::UnsupportedWeight: return "UnsupportedWeight";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::NonConvexInput: return "NonConvexInput";
    }
    return "Unknown";
}

namespace {

std::string_view trim(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    return text;
}

bool is_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Integer parse_integer(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!is_digits(s)) throw Error(ErrorKind::InvalidArgument, "not an integer: '" + std::string(s) + "'");
    Integer value(std::string(s), 10);
    return negative ? Integer(-value) : value;
}

} // namespace

Rational parse_rational(std::string_view text) {
    text = trim(text);
    if (text.empty()) throw Error(ErrorKind::InvalidArgument, "empty rational");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(trim(text.substr(0, slash)));
        Integer den = parse_integer(trim(text.substr(slash + 1)));
        if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    // decimal with optional exponent
    std::string_view mantissa = text;
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = text.substr(0, e);
        exponent = parse_integer(text.substr(e + 1)).get_si();
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa.front() == '+' || mantissa.front() == '-')) {
        negative = mantissa.front() == '-';
        mantissa.remove_prefix(1);
    }
    std::string digits;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
        auto int_part = mantissa.substr(0, dot);
        auto frac_part = mantissa.substr(dot + 1);
        if ((!int_part.empty() && !is_digits(int_part)) || (!frac_part.empty() && !is_digits(frac_part)) ||
            (int_part.empty() && frac_part.empty()))
            throw Error(ErrorKind::InvalidArgument, "not a number: '" + std::string(text) + "'");
        digits = std::string(int_part) + std::string(frac_part);
        exponent -= static_cast<long>(frac_part.size());
    } else {
        if (!is_digits(mantissa)) throw Error(ErrorKind::InvalidArgument, "not a number: '" + std::string(text) + "'");
        digits = std::string(mantissa);
    }
    Rational r{Integer(digits, 10)};
    Integer ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    if (exponent >= 0)
        r *= ten_pow;
    else
        r /= ten_pow;
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

std::string to_string(const Rational &value) { return value.get_str(10); }

std::string to_decimal(Real value, int digits) {
    char buffer[128];
    std::snprintf(buffer, sizeof buffer, "%.*Lg", digits, value);
    return buffer;
}

Real parse_real(std::string_view text) {
    std::string s(trim(text));
    if (s.find('/') != std::string::npos) return to_real(parse_rational(s));
    char *end = nullptr;
    Real value = std::strtold(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw Error(ErrorKind::InvalidArgument, "not a real number: '" + s + "'");
    return value;
}

namespace {

// Splits "a+bi" into real and imaginary texts; the imaginary part is empty when absent.
std::pair<std::string, std::string> split_complex(std::string_view text) {
    std::string s(trim(text));
    if (s.empty()) throw Error(ErrorKind::InvalidArgument, "empty complex number");
    if (s.back() != 'i') return {s, ""};
    s.pop_back();
    // split at the last sign that is not part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto imag_of = [](const std::string &t) -> std::string {
        if (t.empty() || t == "+") return "1";
        if (t == "-") return "-1";
        return t;
    };
    if (split == std::string::npos) return {"0", imag_of(s)};
    return {s.substr(0, split), imag_of(s.substr(split))};
}

} // namespace

Complex parse_complex(std::string_view text) {
    auto [re, im] = split_complex(text);
    return {parse_real(re), im.empty() ? Real(0) : parse_real(im)};
}

GaussianRational parse_gaussian(std::string_view text) {
    auto [re, im] = split_complex(text);
    return {parse_rational(re), im.empty() ? Rational(0) : parse_rational(im)};
}

Real to_real(const Rational &value) {
    // mpq -> long double without going through double
    mpf_class f(value, 128);
    long exp = 0;
    double mant = mpf_get_d_2exp(&exp, f.get_mpf_t());
    mpf_class rest = f - mpf_class(std::ldexp(mant, static_cast<int>(exp)), 128);
    long exp2 = 0;
    double mant2 = mpf_get_d_2exp(&exp2, rest.get_mpf_t());
    return std::ldexp(static_cast<Real>(mant), static_cast<int>(exp)) +
           std::ldexp(static_cast<Real>(mant2), static_cast<int>(exp2));
}

Integer floor(const Rational &value) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return q;
}

Rational frac(const Rational &value) {
    Rational v = value;
    v.canonicalize();
    return v - Rational(floor(v));
}

Rational approximate(Real value, long max_den) {
    // continued fraction convergents
    Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    Real x = value;
    for (int iter = 0; iter < 64; ++iter) {
        Real a = std::floor(x);
        Integer ai(static_cast<double>(a));
        Integer h2 = ai * h1 + h0;
        Integer k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        Real rest = x - a;
        if (rest < 1e-18L) break;
        x = 1 / rest;
    }
    Rational r(h1, k1);
    r.canonicalize();
    return r;
}

std::string to_string(const GaussianRational &value) {
    std::string out = to_string(value.re);
    if (value.im >= 0) out += "+";
    out += to_string(value.im) + "i";
    return out;
}

Complex exp_2pi_i(const GaussianRational &z) {
    constexpr Real two_pi = 2 * std::numbers::pi_v<Real>;
    Real angle = two_pi * to_real(frac(z.re));
    Real magnitude = std::exp(-two_pi * to_real(z.im));
    return std::polar(magnitude, angle);
}

std::int64_t sup_norm(const LatticeVector &v) {
    std::int64_t m = 0;
    for (auto x : v) m = std::max<std::int64_t>(m, x < 0 ? -x : x);
    return m;
}

LatticeVector operator+(const LatticeVector &a, const LatticeVector &b) {
    LatticeVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

LatticeVector operator-(const LatticeVector &a, const LatticeVector &b) {
    LatticeVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

LatticeVector operator-(const LatticeVector &a) {
    LatticeVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
    return out;
}

std::vector<LatticeVector> lattice_ball(std::size_t d, std::int64_t radius) {
    std::vector<LatticeVector> out;
    LatticeVector v(d, -radius);
    if (d == 0) return {LatticeVector{}};
    while (true) {
        out.push_back(v);
        std::size_t k = d;
        while (k > 0) {
            --k;
            if (v[k] < radius) {
                ++v[k];
                for (std::size_t j = k + 1; j < d; ++j) v[j] = -radius;
                break;
            }
            if (k == 0) return out;
        }
    }
}

} // namespace qtorus

#pragma once

// Seeded generators for the randomized property suites.

#include "qtorus/algebra.hpp"
#include "qtorus/lattice.hpp"
#include "qtorus/theta.hpp"

#include <cstdint>
#include <random>

namespace qtorus {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    std::mt19937_64 &engine() noexcept { return engine_; }

    long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }
    Real uniform_real(Real lo, Real hi) { return std::uniform_real_distribution<Real>(lo, hi)(engine_); }

    /// p/q with |p| <= max_num, 1 <= q <= max_den.
    Rational rational(long max_num = 9, long max_den = 7) {
        Rational r(uniform(-max_num, max_num), uniform(1, max_den));
        r.canonicalize();
        return r;
    }

    SkewForm skew(std::size_t d, long max_num = 9, long max_den = 7) {
        Matrix<Rational> m(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) {
                m(i, j) = rational(max_num, max_den);
                m(j, i) = -m(i, j);
            }
        return SkewForm(m);
    }

    LatticeVector vector(std::size_t d, long radius) {
        LatticeVector v(d);
        for (auto &x : v) x = uniform(-radius, radius);
        return v;
    }

    /// One or two terms with phases in (1/12) Z.
    Cyclotomic cyclotomic() {
        Cyclotomic c;
        const long terms = uniform(1, 2);
        for (long k = 0; k < terms; ++k) c += Cyclotomic(rational(), PhaseRational(Rational(uniform(0, 11)) / 12));
        return c.is_zero() ? Cyclotomic(1) : c;
    }

    ExactElement exact_element(const SkewForm &phi, long max_terms = 4, long radius = 3) {
        ExactElement x(phi);
        const long terms = uniform(1, max_terms);
        for (long k = 0; k < terms; ++k) x.add_term(vector(phi.dim(), radius), cyclotomic());
        return x;
    }

    NumericElement numeric_element(const SkewForm &phi, long max_terms = 4, long radius = 3) {
        NumericElement x(phi);
        const long terms = uniform(1, max_terms);
        for (long k = 0; k < terms; ++k) x.add_term(vector(phi.dim(), radius), Complex(uniform_real(-1, 1), uniform_real(-1, 1)));
        return x;
    }

    /// Word of length <= max_len in the standard generators and their inverses.
    OddSymplecticMatrix group_element(std::size_t d, int max_len = 4) {
        const auto gens = standard_generators(d);
        auto g = OddSymplecticMatrix::identity(d);
        const int len = static_cast<int>(uniform(0, max_len));
        for (int k = 0; k < len; ++k) {
            const auto &h = gens[static_cast<std::size_t>(uniform(0, static_cast<long>(gens.size()) - 1))];
            g = g * (uniform(0, 1) ? h : h.inverse());
        }
        return g;
    }

    /// Omega = X + iY with X symmetric rational and Y = I + B^T B / 4, B in {-1,0,1}.
    ThetaParams theta_params(std::size_t d) {
        Matrix<Integer> b(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) b(i, j) = uniform(-1, 1);
        Matrix<GaussianRational> omega(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) {
                Rational y = i == j ? 1 : 0;
                for (std::size_t k = 0; k < d; ++k) y += Rational(b(k, i) * b(k, j)) / 4;
                omega(i, j) = omega(j, i) = GaussianRational(rational(3, 4), y);
            }
        std::vector<Rational> l(d);
        for (auto &x : l) x = rational(3, 5);
        return ThetaParams(omega, l, skew(d));
    }

private:
    std::mt19937_64 engine_;
};

} // namespace qtorus

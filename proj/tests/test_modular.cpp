#include "qtorus/error.hpp"
#include "qtorus/modular.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace qtorus;

namespace {

// sigma_k(n) by trial division
Integer sigma(long k, long n) {
    Integer s = 0;
    for (long m = 1; m <= n; ++m)
        if (n % m == 0) {
            Integer p;
            mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(k));
            s += p;
        }
    return s;
}

// hand-written S_2 / S_3 character data: |class| chi(tau) / dim
Rational character_ratio(long class_size, long chi, long dim) { return Rational(class_size * chi) / dim; }

QSeries monomial(std::size_t a, std::size_t b, std::size_t c, std::size_t order) {
    QSeries out = QSeries::one(order);
    for (std::size_t k = 0; k < a; ++k) out = out * eisenstein(2, order);
    for (std::size_t k = 0; k < b; ++k) out = out * eisenstein(4, order);
    for (std::size_t k = 0; k < c; ++k) out = out * eisenstein(6, order);
    return out;
}

} // namespace

TEST_CASE("Eisenstein coefficients from divisor sums") {
    auto e2 = eisenstein(2, 10), e4 = eisenstein(4, 10), e6 = eisenstein(6, 10);
    CHECK(e2[0] == 1);
    CHECK(e2[1] == -24);
    CHECK(e2[2] == -72);
    CHECK(e2[3] == -96);
    CHECK(e4[1] == 240);
    CHECK(e4[2] == 2160);
    CHECK(e6[1] == -504);
    CHECK(e6[2] == -16632);
    for (long n = 1; n <= 10; ++n) {
        CHECK(e2[n] == Rational(-24 * sigma(1, n)));
        CHECK(e4[n] == Rational(240 * sigma(3, n)));
        CHECK(e6[n] == Rational(-504 * sigma(5, n)));
    }
    CHECK_THROWS_AS(eisenstein(8, 10), Error);
    CHECK_THROWS_AS(eisenstein(2, 0), Error);
}

TEST_CASE("Ramanujan identities hold exactly to order 50") {
    const std::size_t n = 50;
    auto e2 = eisenstein(2, n), e4 = eisenstein(4, n), e6 = eisenstein(6, n);
    CHECK(e2.q_derivative() == (e2 * e2 - e4).scaled(Rational(1, 12)));
    CHECK(e4.q_derivative() == (e2 * e4 - e6).scaled(Rational(1, 3)));
    CHECK(e6.q_derivative() == (e2 * e6 - e4 * e4).scaled(Rational(1, 2)));
    // and a deliberately wrong constant is caught
    CHECK_FALSE(e2.q_derivative() == (e2 * e2 - e4).scaled(Rational(1, 24)));
}

TEST_CASE("series arithmetic tracks the smaller order") {
    auto a = eisenstein(2, 10), b = eisenstein(4, 6);
    CHECK((a + b).order() == 6);
    CHECK((a * b).order() == 6);
    CHECK((a - a).order() == 10);
}

TEST_CASE("partitions") {
    CHECK(partitions(0).size() == 1);
    const std::vector<std::size_t> counts{1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
    for (std::size_t d = 0; d < counts.size(); ++d) {
        auto ps = partitions(d);
        CHECK(ps.size() == counts[d]);
        for (const auto &p : ps) {
            CHECK(std::accumulate(p.begin(), p.end(), 0L) == static_cast<long>(d));
            CHECK(std::is_sorted(p.rbegin(), p.rend()));
        }
    }
    CHECK(partitions(30).size() == 5604);
}

TEST_CASE("transposition character against character tables") {
    // S_2: trivial and sign
    CHECK(transposition_character({2}) == character_ratio(1, 1, 1));
    CHECK(transposition_character({1, 1}) == character_ratio(1, -1, 1));
    // S_3: trivial, standard, sign; class of transpositions has 3 elements
    CHECK(transposition_character({3}) == character_ratio(3, 1, 1));
    CHECK(transposition_character({2, 1}) == character_ratio(3, 0, 2));
    CHECK(transposition_character({1, 1, 1}) == character_ratio(3, -1, 1));
    // S_4 standard rep (3,1): chi(tau) = 1, dim 3, class size 6
    CHECK(transposition_character({3, 1}) == character_ratio(6, 1, 3));
    // conjugate partitions give opposite values
    CHECK(transposition_character({3, 2}) == -transposition_character({2, 2, 1}));
}

TEST_CASE("brute force small cases") {
    CHECK(brute_force_covers(2, 1) == 0);
    CHECK(brute_force_covers(2, 2) == 2);
    // g = 3, d = 2: 4 pairs (a, b), tau_1..tau_4 all equal (12), transitive
    CHECK(brute_force_covers(3, 2) == 2);
    CHECK(brute_force_covers(2, 3, Execution::parallel) == brute_force_covers(2, 3, Execution::serial));
    CHECK_THROWS_AS(brute_force_covers(2, 6), Error);
    CHECK_THROWS_AS(brute_force_covers(4, 2), Error);
}

TEST_CASE("generating function against brute force") {
    for (long g : {2, 3}) {
        auto f = covers_series(g, 4);
        CHECK(f[0] == 0);
        CHECK(f[1] == 0);
        for (std::size_t d = 1; d <= 4; ++d) CHECK(f[d] == brute_force_covers(g, static_cast<long>(d)));
    }
    CHECK(covers_series(2, 5)[5] == brute_force_covers(2, 5));
}

TEST_CASE("disconnected counts are character sums") {
    auto z = covers_series(2, 6, false);
    for (std::size_t d = 1; d <= 6; ++d) {
        Rational s = 0;
        for (const auto &p : partitions(d)) {
            const Rational f = transposition_character(p);
            s += f * f;
        }
        CHECK(z[d] == s);
    }
    // unlabeled branch points divide by (2g - 2)!
    auto labeled = covers_series(3, 6), unlabeled = covers_series(3, 6, true, false);
    for (std::size_t d = 0; d <= 6; ++d) CHECK(unlabeled[d] * 24 == labeled[d]);
}

TEST_CASE("exp of the connected series is the disconnected series") {
    for (Execution ex : {Execution::serial, Execution::parallel}) {
        auto z = disconnected_bivariate(12, 6, ex);
        auto f = log_series(z);
        CHECK(exp_series(f) == z);
        CHECK(f.coefficient(0, 0) == 0);
    }
    CHECK(disconnected_bivariate(10, 4, Execution::parallel) == disconnected_bivariate(10, 4, Execution::serial));
}

TEST_CASE("quasi-modular basis") {
    CHECK(QuasiModularBasis(0).size() == 1);
    CHECK(QuasiModularBasis(6).size() == 3);
    CHECK(QuasiModularBasis(12).size() == 7);
    auto b = QuasiModularBasis(12);
    for (std::size_t i = 0; i < b.size(); ++i) {
        auto [x, y, z] = b.monomials[i];
        CHECK(2 * x + 4 * y + 6 * z == 12);
        for (std::size_t j = 0; j < i; ++j) CHECK(b.monomials[j] != b.monomials[i]);
    }
    CHECK_THROWS_AS(QuasiModularBasis(5), Error);
}

TEST_CASE("decomposition round trips and failures") {
    auto d = quasimodular_decompose(monomial(3, 0, 0, 20), 6);
    REQUIRE(d.coefficients.size() == 1);
    CHECK(d.coefficients.at({3, 0, 0}) == 1);

    QSeries mix = monomial(1, 1, 0, 24).scaled(Rational(2, 3)) - monomial(0, 0, 1, 24).scaled(5);
    auto m = quasimodular_decompose(mix, 6);
    CHECK(m.coefficients.at({1, 1, 0}) == Rational(2, 3));
    CHECK(m.coefficients.at({0, 0, 1}) == -5);
    CHECK(m.surplus_equations == 25 - 3);

    try {
        quasimodular_decompose(eisenstein(4, 20), 6);
        FAIL("expected NoSolution");
    } catch (const NoSolutionError &e) {
        CHECK(e.kind() == ErrorKind::NoSolution);
        CHECK(e.mismatch_index <= 20);
        CHECK(e.expected != e.reconstructed);
    }
    // too short for the overdetermination margin
    CHECK_THROWS_AS(quasimodular_decompose(eisenstein(2, 9), 6), Error);
}

TEST_CASE("covers series is quasi-modular of weight 6g - 6") {
    auto f2 = covers_series(2, 20);
    auto d2 = quasimodular_decompose(f2, 6);
    CHECK(d2.surplus_equations >= 12);
    // the reconstruction agrees with every coefficient
    QSeries rebuilt = QSeries::zero(20);
    for (const auto &[mono, c] : d2.coefficients)
        rebuilt = rebuilt + monomial(std::get<0>(mono), std::get<1>(mono), std::get<2>(mono), 20).scaled(c);
    CHECK(rebuilt == f2);
    // a weight-12 fit of F_2 fails: no F_2 multiple lives there
    CHECK_THROWS_AS(quasimodular_decompose(f2, 12), Error);

    auto f3 = covers_series(3, 30);
    auto d3 = quasimodular_decompose(f3, 12);
    CHECK(d3.surplus_equations >= 12);
}

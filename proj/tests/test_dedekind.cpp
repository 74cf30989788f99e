#include "qtorus/dedekind.hpp"
#include "qtorus/error.hpp"

#include "support.hpp"

#include <doctest.h>

#include <numeric>

using namespace qtorus;
using namespace qtorus::testing;

namespace {

// ((x)) with an exact floor
Rational sawtooth(const Rational &x) {
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    if (Rational(fl) == x) return 0;
    return x - Rational(fl) - Rational(1, 2);
}

Rational sawtooth_sum(long p, long q) {
    Rational s = 0;
    for (long k = 1; k < q; ++k) s += sawtooth(Rational(k) / q) * sawtooth(Rational(k * p) / q);
    return s;
}

Rational rhs_d(long p, long q) { return Rational(p * p + q * q + 1 - 3 * p * q) / (12 * p * q); }

} // namespace

TEST_CASE("small values") {
    CHECK(dedekind_direct({1, 2}) == 0);
    CHECK(dedekind_direct({1, 3}) == Rational(1, 18));
    CHECK(dedekind_direct({2, 3}) == Rational(-1, 18));
    CHECK(dedekind_recursive({2, 3}) == Rational(-1, 18));
    CHECK(dedekind_direct({7, 1}) == 0);
    CHECK(dedekind_direct({-7, 1}) == 0);
    CHECK(dedekind(Rational(2, 3)) == Rational(-1, 18));
    CHECK(dedekind(Rational(5)) == 0);
    CHECK_THROWS_AS(CoprimePair(2, 4), Error);
    CHECK_THROWS_AS(CoprimePair(1, 0), Error);
    CHECK_THROWS_AS(CoprimePair(0, 3), Error);
}

TEST_CASE("direct sum against an exact-floor sawtooth oracle") {
    for (long q = 1; q <= 60; ++q)
        for (long p = -q; p <= 2 * q; ++p)
            if (std::gcd(p, q) == 1) CHECK(dedekind_direct({p, q}) == sawtooth_sum(p, q));
}

TEST_CASE("s(1, q) closed form") {
    for (long q = 1; q <= 300; ++q) CHECK(dedekind_direct({1, q}) == Rational((q - 1) * (q - 2)) / (12 * q));
}

TEST_CASE("direct equals recursive for q <= 500") {
    for (long q = 1; q <= 500; ++q)
        for (long p = 0; p < q; ++p)
            if (std::gcd(p, q) == 1) REQUIRE(dedekind_direct({p, q}) == dedekind_recursive({p, q}));
    for (int k = 0; k < 100; ++k) {
        const long q = uniform(1, 400), p = uniform(-1000, 1000);
        if (std::gcd(p, q) != 1) continue;
        CHECK(dedekind_recursive({p + q, q}) == dedekind_recursive({p, q}));
        CHECK(dedekind_recursive({-p, q}) == -dedekind_recursive({p, q}));
    }
}

TEST_CASE("axioms b) to d) for q <= 200") {
    for (long q = 1; q <= 200; ++q)
        for (long p = 1; p <= 2 * q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const Rational s = dedekind_direct({p, q});
            CHECK(dedekind_direct({p + 3 * q, q}) == s);
            CHECK(dedekind_direct({p - 5 * q, q}) == s);
            CHECK(dedekind_direct({-p, q}) == -s);
            // reciprocity as an integer identity
            const Rational lhs = 12 * p * q * (s + dedekind_direct({q, p}));
            CHECK(lhs == p * p + q * q + 1 - 3 * p * q);
        }
    CHECK(2 * dedekind_direct({1, 1}) == rhs_d(1, 1));
}

TEST_CASE("inversion: s(-1/x) = s(x) - P(x)") {
    for (long q = 1; q <= 200; ++q)
        for (long p = 1; p < 3 * q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const Rational x = Rational(p) / q;
            CHECK(dedekind(-1 / x) == dedekind(x) - rhs_d(p, q));
        }
    // x = 1/2 has P = 0, where either sign works
    CHECK(dedekind(Rational(-2)) == dedekind(Rational(1, 2)) + rhs_d(1, 2));
}

TEST_CASE("the sign s(-1/x) = s(x) + P(x) fails") {
    // x = 1/3: s(-3) = 0, s(1/3) = 1/18, P(1/3) = 1/18
    CHECK(dedekind(Rational(-3)) == 0);
    CHECK(dedekind(Rational(1, 3)) + rhs_d(1, 3) == Rational(1, 9));
    auto report = boundary_modularity_check(10);
    REQUIRE(report.plus_sign_witness.has_value());
    CHECK(report.plus_sign_witness->p == 1);
    CHECK(report.plus_sign_witness->q == 3);
    CHECK(report.plus_sign_failures > 0);
}

TEST_CASE("range check") {
    auto small = boundary_modularity_check(10);
    CHECK(small.ok());
    CHECK(small.failures.empty());
    auto r = boundary_modularity_check(200, Execution::parallel);
    auto s = boundary_modularity_check(200, Execution::serial);
    CHECK(r.ok());
    CHECK(r.pairs_checked == s.pairs_checked);
    CHECK(r.plus_sign_failures == s.plus_sign_failures);
    // coprime 1 <= p < q <= 200 plus q = 1
    long count = 0;
    for (long q = 1; q <= 200; ++q)
        for (long p = 1; p <= q; ++p) count += std::gcd(p, q) == 1 && (p < q || q == 1);
    CHECK(r.pairs_checked == static_cast<std::size_t>(count));
}

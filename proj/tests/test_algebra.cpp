#include "qtorus/algebra.hpp"
#include "qtorus/serialization.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace qtorus;
using namespace qtorus::testing;

namespace {

SkewForm quarter() { return SkewForm::rank_two(Rational(1, 4)); }

ExactElement e(const SkewForm &phi, LatticeVector n) { return ExactElement::generator(phi, std::move(n)); }

} // namespace

TEST_CASE("generator rule e(m)e(n) = alpha(m,n) e(m+n)") {
    const auto phi = quarter();
    auto product = multiply(e(phi, {1, 0}), e(phi, {0, 1}));
    // alpha = exp(2 pi i / 4) = i
    CHECK(product == ExactElement::generator(phi, {1, 1}, Cyclotomic::phase(PhaseRational(Rational(1, 4)))));
    CHECK(product.coefficient({1, 1}).to_complex() == Complex(0, 1));

    // e(1,0)e(0,1) = exp(2 pi i * 2 * 1/4) e(0,1)e(1,0)
    auto reversed = multiply(e(phi, {0, 1}), e(phi, {1, 0}));
    CHECK(product == reversed.scaled(Cyclotomic::phase(PhaseRational(Rational(1, 2)))));
}

TEST_CASE("unit element") {
    for (int k = 0; k < 50; ++k) {
        const std::size_t d = static_cast<std::size_t>(uniform(1, 4));
        auto phi = random_skew(d);
        auto x = random_exact_element(phi);
        CHECK(multiply(ExactElement::unit(phi), x) == x);
        CHECK(multiply(x, ExactElement::unit(phi)) == x);
    }
}

TEST_CASE("associativity holds exactly on random sparse triples") {
    for (int k = 0; k < 300; ++k) {
        const std::size_t d = static_cast<std::size_t>(uniform(1, 4));
        auto phi = random_skew(d);
        auto x = random_exact_element(phi);
        auto y = random_exact_element(phi);
        auto z = random_exact_element(phi);
        CHECK(multiply(multiply(x, y), z) == multiply(x, multiply(y, z)));
    }
}

TEST_CASE("alpha(m,n) alpha(n,m) = 1: group commutators are unimodular scalars") {
    for (int k = 0; k < 200; ++k) {
        const std::size_t d = static_cast<std::size_t>(uniform(2, 4));
        auto phi = random_skew(d);
        auto m = random_vector(d, 4), n = random_vector(d, 4);
        CHECK(PhaseRational(cocycle(phi, m, n)) + cocycle(phi, n, m) == PhaseRational());
        auto em = e(phi, m), en = e(phi, n);
        auto commutator = multiply(multiply(em, en), multiply(star(em), star(en)));
        REQUIRE(commutator.size() == 1);
        const auto &[index, value] = *commutator.terms().begin();
        CHECK(sup_norm(index) == 0);
        CHECK(value.is_monomial());
        CHECK(value.magnitude_bound() == 1);
    }
}

TEST_CASE("star is an involutive anti-homomorphism") {
    const auto phi = quarter();
    CHECK(star(e(phi, {1, 0})) == e(phi, {-1, 0}));
    auto scalar = ExactElement::generator(phi, {0, 0}, Cyclotomic(Rational(2), PhaseRational(Rational(1, 3))));
    CHECK(star(scalar) == ExactElement::generator(phi, {0, 0}, Cyclotomic(Rational(2), PhaseRational(Rational(2, 3)))));
    for (int k = 0; k < 200; ++k) {
        const std::size_t d = static_cast<std::size_t>(uniform(1, 4));
        auto phi_r = random_skew(d);
        auto x = random_exact_element(phi_r), y = random_exact_element(phi_r);
        CHECK(star(star(x)) == x);
        CHECK(star(multiply(x, y)) == multiply(star(y), star(x)));
    }
}

TEST_CASE("mismatched parameters are rejected") {
    auto x = e(quarter(), {1, 0});
    auto y = e(SkewForm::rank_two(Rational(1, 5)), {1, 0});
    try {
        multiply(x, y);
        FAIL("expected ParameterMismatch");
    } catch (const Error &err) {
        CHECK(err.kind() == ErrorKind::ParameterMismatch);
    }
}

TEST_CASE("SL(2,Z) automorphisms") {
    const std::array<std::int64_t, 4> id{1, 0, 0, 1}, s{0, -1, 1, 0}, t{1, 1, 0, 1};
    auto phi = SkewForm::rank_two(Rational(2, 7));
    auto x = random_exact_element(phi);
    CHECK(sl2z_automorphism(id, x) == x);
    CHECK(sl2z_automorphism(s, e(phi, {1, 0})) == e(phi, {0, 1}));

    for (int k = 0; k < 200; ++k) {
        auto m = random_vector(2, 5), n = random_vector(2, 5);
        const auto &g = (k % 2) ? s : t;
        auto lhs = sl2z_automorphism(g, multiply(e(phi, m), e(phi, n)));
        auto rhs = multiply(sl2z_automorphism(g, e(phi, m)), sl2z_automorphism(g, e(phi, n)));
        CHECK(lhs == rhs);
    }
    // sigma_g sigma_h = sigma_{gh}
    const std::array<std::int64_t, 4> st{0, -1, 1, 1}; // s * t
    CHECK(sl2z_automorphism(s, sl2z_automorphism(t, x)) == sl2z_automorphism(st, x));

    const std::array<std::int64_t, 4> flip{0, 1, 1, 0};
    CHECK_THROWS_AS(sl2z_automorphism(flip, x), Error);
    // det = -1 reverses the cocycle, so it cannot be multiplicative
    auto a = e(phi, {1, 0}), b = e(phi, {0, 1});
    auto naive = [&](const ExactElement &u) {
        ExactElement out(u.phi());
        for (const auto &[n, c] : u.terms()) out.add_term({n[1], n[0]}, c);
        return out;
    };
    CHECK_FALSE(naive(multiply(a, b)) == multiply(naive(a), naive(b)));
}

TEST_CASE("point automorphisms are diagonal and multiplicative") {
    auto phi1 = SkewForm::zero(1);
    PointAutomorphism<Cyclotomic> trivial({Cyclotomic(1)});
    auto x = random_exact_element(phi1);
    CHECK(apply_point_automorphism(trivial, x) == x);

    PointAutomorphism<Cyclotomic> t({Cyclotomic::phase(PhaseRational(Rational(1, 4)))});
    CHECK(t.unitary());
    // i^3 = -i
    CHECK(apply_point_automorphism(t, e(phi1, {3})).coefficient({3}).to_complex() == Complex(0, -1));

    for (int k = 0; k < 100; ++k) {
        const std::size_t d = static_cast<std::size_t>(uniform(1, 3));
        auto phi = random_skew(d);
        std::vector<Cyclotomic> values;
        for (std::size_t i = 0; i < d; ++i) values.emplace_back(random_rational(5, 3) + 6, PhaseRational(random_rational()));
        PointAutomorphism<Cyclotomic> chi(values);
        auto u = random_exact_element(phi), v = random_exact_element(phi);
        CHECK(apply_point_automorphism(chi, multiply(u, v)) ==
              multiply(apply_point_automorphism(chi, u), apply_point_automorphism(chi, v)));
    }
}

TEST_CASE("truncation and decay certificates") {
    auto phi = random_skew(2);
    auto x = random_exact_element(phi, 6, 3);
    CHECK(smooth_truncate(x, x.support_radius()) == x);
    auto constant = smooth_truncate(x, 0);
    for (const auto &[n, c] : constant.terms()) CHECK(sup_norm(n) == 0);

    // a_n = exp(-n^2) truncated at radius 10
    NumericElement g(SkewForm::zero(1));
    for (std::int64_t n = -20; n <= 20; ++n) g.add_term({n}, Complex(std::exp(-static_cast<Real>(n * n))));
    auto truncated = smooth_truncate(g, 10);
    CHECK(truncated.size() == 21);
    const Real bound = gaussian_tail_bound(1, 1, 10);
    CHECK(bound < 1e-40L);
    CHECK(bound > 0);
    Real dropped = sup_norm_bound(g) - sup_norm_bound(truncated);
    CHECK(dropped <= bound * (1 + 1e-6L));

    // brute-force check of the d = 2 bound
    Real tail = 0;
    for (std::int64_t a = -30; a <= 30; ++a)
        for (std::int64_t b = -30; b <= 30; ++b)
            if (std::max(std::abs(a), std::abs(b)) > 2) tail += std::exp(-0.5L * static_cast<Real>(a * a + b * b));
    CHECK(tail <= gaussian_tail_bound(2, 0.5L, 2));
    CHECK(gaussian_tail_bound(2, 0.5L, 2) < 3 * tail);
}

TEST_CASE("parallel multiply matches the serial reference") {
    for (int k = 0; k < 20; ++k) {
        auto phi = random_skew(3);
        auto x = random_exact_element(phi, 30, 5), y = random_exact_element(phi, 30, 5);
        CHECK(multiply(x, y, Execution::parallel) == multiply(x, y, Execution::serial));
    }
}

TEST_CASE("numeric elements follow the exact ones") {
    for (int k = 0; k < 50; ++k) {
        auto phi = random_skew(2);
        auto x = random_exact_element(phi), y = random_exact_element(phi);
        auto exact = to_numeric(multiply(x, y));
        auto numeric = multiply(to_numeric(x), to_numeric(y));
        for (const auto &[n, c] : numeric.terms()) CHECK(std::abs(c - exact.coefficient(n)) < 1e-15L);
    }
}

TEST_CASE("JSON wire format") {
    auto phi = SkewForm::rank_two(Rational(1, 3));
    NumericElement x(phi);
    x.add_term({1, -2}, Complex(0.5L, -0.25L));
    x.add_term({0, 0}, Complex(1));
    auto j = element_to_json(x);
    CHECK(j["d"] == 2);
    CHECK(j["phi"][0][1] == "1/3");
    CHECK(j["terms"][0]["re"].is_string());
    auto back = element_from_json(j);
    CHECK(back == x);
    CHECK(element_from_json(Json::parse(R"({"d":1,"phi":[["0"]],"terms":[{"n":[2],"re":"0.1","im":"0"}]})"))
              .coefficient({2})
              .real() == doctest::Approx(0.1));
    CHECK_THROWS_AS(element_from_json(Json::parse(R"({"d":2,"phi":[["0"]],"terms":[]})")), Error);
}

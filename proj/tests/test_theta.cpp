#include "qtorus/theta.hpp"

#include "support.hpp"

#include <doctest.h>

#include <numbers>

using namespace qtorus;
using namespace qtorus::testing;

namespace {

constexpr Real pi = std::numbers::pi_v<Real>;

ThetaParams diagonal(std::size_t d, Rational y, std::vector<Rational> l = {}, SkewForm phi = {}) {
    Matrix<GaussianRational> omega(d, d);
    for (std::size_t i = 0; i < d; ++i) omega(i, i) = GaussianRational(0, y);
    if (l.empty()) l.assign(d, 0);
    if (phi.dim() == 0) phi = SkewForm::zero(d);
    return ThetaParams(omega, l, phi);
}

// Both sides of the d = 1 law written out by hand in plain complex arithmetic:
// lhs(b) = exp(2 pi i (w b^2 / 2 + l b)) exp(-2 pi i w b xi)
// rhs(b) = exp(-2 pi i (w xi^2 / 2 - l xi)) exp(2 pi i (w (b - xi)^2 / 2 + l (b - xi)))
std::pair<Complex, Complex> rank_one_sides(Complex w, Real l, Real xi, Real b) {
    const Complex two_pi_i(0, 2 * pi);
    const Complex lhs = std::exp(two_pi_i * (w * b * b / Real(2) + l * b)) * std::exp(-two_pi_i * w * b * xi);
    const Complex rhs = std::exp(-two_pi_i * (w * xi * xi / Real(2) - l * xi)) *
                        std::exp(two_pi_i * (w * (b - xi) * (b - xi) / Real(2) + l * (b - xi)));
    return {lhs, rhs};
}

} // namespace

TEST_CASE("theta_series examples") {
    auto p = diagonal(1, 2);
    auto r0 = theta_series(p, 0);
    CHECK(r0.element.size() == 1);
    CHECK(r0.element.coefficient({0}) == Complex(1));

    auto r1 = theta_series(p, 1);
    CHECK(r1.element.size() == 3);
    CHECK(std::abs(r1.element.coefficient({1}) - std::exp(-2 * pi)) < 1e-18L);
    CHECK(std::abs(r1.element.coefficient({-1}) - std::exp(-2 * pi)) < 1e-18L);

    auto r2 = theta_series(diagonal(2, 2), 2);
    CHECK(r2.element.size() == 25);
    for (const auto &[a, c] : r2.element.terms()) {
        const Real norm2 = static_cast<Real>(a[0] * a[0] + a[1] * a[1]);
        CHECK(std::abs(c - std::exp(-2 * pi * norm2)) <= 1e-18L * std::exp(-2 * pi * norm2) + 1e-30L);
        CHECK(c == r2.element.coefficient(-a));
    }
}

TEST_CASE("parameter validation") {
    Matrix<GaussianRational> bad{{GaussianRational(0, -1)}};
    CHECK_THROWS_AS(ThetaParams(bad, {Rational(0)}, SkewForm::zero(1)), Error);
    try {
        ThetaParams(bad, {Rational(0)}, SkewForm::zero(1));
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::DivergentParameters);
    }
    // indefinite imaginary part with positive diagonal
    Matrix<GaussianRational> indefinite{{GaussianRational(0, 1), GaussianRational(0, 2)},
                                        {GaussianRational(0, 2), GaussianRational(0, 1)}};
    CHECK_THROWS_AS(ThetaParams(indefinite, {Rational(0), Rational(0)}, SkewForm::zero(2)), Error);
    Matrix<GaussianRational> asym{{GaussianRational(0, 1), GaussianRational(1)},
                                  {GaussianRational(0), GaussianRational(0, 1)}};
    CHECK_THROWS_AS(ThetaParams(asym, {Rational(0), Rational(0)}, SkewForm::zero(2)), Error);
}

TEST_CASE("coefficient decay and tail bound") {
    for (int k = 0; k < 10; ++k) {
        auto p = random_theta_params(static_cast<std::size_t>(uniform(1, 2)));
        const Real qmin = min_imaginary_eigenvalue(p);
        auto series = theta_series(p, 3);
        for (const auto &[a, c] : series.element.terms()) {
            Real n2 = 0;
            for (auto x : a) n2 += static_cast<Real>(x * x);
            CHECK(std::abs(c) <= std::exp(-pi * qmin * n2) * (1 + 1e-15L));
        }
        // the stored series at radius 3 versus a radius 9 reference
        auto big = theta_series(p, 9);
        Real dropped = 0;
        for (const auto &[a, c] : big.element.terms())
            if (sup_norm(a) > 3) dropped += std::abs(c);
        CHECK(dropped <= series.tail_bound);
    }
}

TEST_CASE("t_xi examples and multiplicativity") {
    auto p = diagonal(1, 2);
    auto x = NumericElement::generator(p.phi, {1});
    CHECK(t_xi({0}, x, p) == x);
    auto moved = t_xi({1}, x, p);
    CHECK(std::abs(moved.coefficient({1}) / std::exp(4 * pi) - Real(1)) < 1e-17L);

    CHECK_THROWS_AS(t_xi({1}, NumericElement::generator(SkewForm::rank_two(Rational(1, 3)), {1, 0}), p), Error);

    for (int k = 0; k < 50; ++k) {
        auto q = random_theta_params(2);
        auto xi = random_vector(2, 2);
        auto u = random_numeric_element(q.phi), v = random_numeric_element(q.phi);
        auto lhs = t_xi(xi, multiply(u, v), q);
        auto rhs = multiply(t_xi(xi, u, q), t_xi(xi, v, q));
        for (const auto &[n, c] : lhs.terms())
            CHECK(std::abs(c - rhs.coefficient(n)) <= 1e-15L * std::max<Real>(1, std::abs(c)));
    }
}

TEST_CASE("t_{xi+eta} = t_xi o t_eta exactly, and the law applied twice predicts the scalar") {
    for (int k = 0; k < 100; ++k) {
        const std::size_t d = static_cast<std::size_t>(uniform(1, 3));
        auto p = random_theta_params(d);
        auto xi = random_vector(d, 2), eta = random_vector(d, 2), a = random_vector(d, 4);
        auto composed = t_xi_exponent(p, xi, a) + t_xi_exponent(p, eta, a);
        CHECK(composed == t_xi_exponent(p, xi + eta, a));

        // t_xi t_eta theta = c_eta c_xi t_xi(e(eta)) alpha(xi, eta) theta e(xi + eta)
        auto c = [&](const LatticeVector &v) { return -(quadratic(p, v) - GaussianRational(linear(p, v))); };
        auto twice = c(eta) + c(xi) + t_xi_exponent(p, xi, eta) + GaussianRational(p.phi(xi, eta));
        auto once = c(xi + eta);
        auto gap = twice - once;
        CHECK(gap.im == 0);
        CHECK(gap.re.get_den() == 1);
    }
}

TEST_CASE("convention resolution by symbolic comparison") {
    // d = 1: phi = 0 makes left and right multiplication coincide
    auto d1 = closing_conventions(diagonal(1, 2), {1}, 4);
    CHECK(d1 == std::vector<ThetaConvention>{ThetaConvention::half_left, ThetaConvention::half_right});
    for (int k = 0; k < 10; ++k) {
        auto p = random_theta_params(1);
        CHECK(closing_conventions(p, {1}, 4) == d1);
    }
    // d = 2 with phi != 0 separates the two
    auto p2 = diagonal(2, 1, {Rational(1, 2), Rational(0)}, SkewForm::rank_two(Rational(1, 5)));
    CHECK(closing_conventions(p2, {1, 1}, 4) == std::vector<ThetaConvention>{kThetaConvention});
    CHECK(closing_conventions(p2, {0, 0}, 4).size() == 4);
}

TEST_CASE("transformation law examples") {
    auto p = diagonal(1, 2);
    auto zero = verify_transformation_law(p, {0}, 8);
    CHECK(zero.max_absolute == 0);
    CHECK(zero.window == 8);

    auto r = verify_transformation_law(p, {1}, 8);
    CHECK(r.max_discrepancy <= 1e-12L);
    CHECK(r.window == 7);

    auto p2 = diagonal(2, 1, {Rational(1, 2), Rational(0)}, SkewForm::rank_two(Rational(1, 5)));
    CHECK(verify_transformation_law(p2, {1, 1}, 6).max_discrepancy <= 1e-12L);

    CHECK_THROWS_AS(verify_transformation_law(p, {2}, 2), Error);
    try {
        verify_transformation_law(p, {3}, 2);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::WindowEmpty);
    }
}

TEST_CASE("d = 1 hand-expanded oracle agrees with the library sides") {
    for (int k = 0; k < 10; ++k) {
        auto p = random_theta_params(1);
        const Complex w = p.omega(0, 0).to_complex();
        const Real l = to_real(p.l[0]);
        const std::int64_t xi = uniform(-2, 2);
        auto theta = theta_series(p, 4);
        auto lhs = t_xi({xi}, theta.element, p);
        auto rhs = multiply(theta.element, NumericElement::generator(p.phi, {xi}))
                       .scaled(exp_2pi_i(-(quadratic(p, {xi}) - GaussianRational(linear(p, {xi})))));
        for (std::int64_t b = -(4 - std::abs(xi)); b <= 4 - std::abs(xi); ++b) {
            auto [ol, orr] = rank_one_sides(w, l, static_cast<Real>(xi), static_cast<Real>(b));
            CHECK(std::abs(ol - lhs.coefficient({b})) <= 1e-13L * std::max<Real>(1, std::abs(ol)));
            CHECK(std::abs(orr - rhs.coefficient({b})) <= 1e-13L * std::max<Real>(1, std::abs(orr)));
        }
    }
}

TEST_CASE("random parameters satisfy the law at radius 8") {
    for (int k = 0; k < 12; ++k) {
        const std::size_t d = static_cast<std::size_t>(1 + k % 3);
        auto p = random_theta_params(d);
        auto xi = random_vector(d, 2);
        CHECK(verify_transformation_law(p, xi, 8).max_discrepancy <= 1e-12L);
    }
}

#include "qtorus/lattice.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace qtorus;
using namespace qtorus::testing;

namespace {

// Independent route for g . graph(phi): push the column basis (x, Phi x)
// through g as plain 2d-vectors, then solve W = Phi' U for the new graph map.
SkewForm graph_image_oracle(const OddSymplecticMatrix &g, const SkewForm &phi) {
    const std::size_t d = phi.dim();
    const auto graph = graph_of(phi);
    Matrix<Rational> u(d, d), w(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<Rational> image(2 * d);
        for (std::size_t i = 0; i < 2 * d; ++i)
            for (std::size_t j = 0; j < 2 * d; ++j) image[i] += Rational(g.matrix()(i, j)) * graph.basis[k][j];
        for (std::size_t i = 0; i < d; ++i) {
            u(i, k) = image[i];
            w(i, k) = image[d + i];
        }
    }
    auto uinv = u.inverse();
    REQUIRE(uinv.has_value());
    return SkewForm((w * *uinv).transpose());
}

} // namespace

TEST_CASE("graph_of is isotropic of dimension d") {
    SUBCASE("rank two, theta = 1/3") {
        auto g = graph_of(SkewForm::rank_two(Rational(1, 3)));
        CHECK(g.isotropic());
        CHECK(g.dimension() == 2);
    }
    SUBCASE("rank one zero form is the first axis") {
        auto g = graph_of(SkewForm::zero(1));
        REQUIRE(g.basis.size() == 1);
        CHECK(g.basis[0] == std::vector<Rational>{1, 0});
        CHECK(g.isotropic());
    }
    SUBCASE("random rank three") {
        for (int k = 0; k < 50; ++k) {
            auto g = graph_of(random_skew(3));
            CHECK(g.isotropic());
            CHECK(g.dimension() == 3);
        }
    }
}

TEST_CASE("skew form validation") {
    Matrix<Rational> m{{0, 1}, {1, 0}};
    CHECK_THROWS_AS(SkewForm{m}, Error);
    auto phi = SkewForm::rank_two(Rational(2, 5));
    CHECK(phi({1, 0}, {0, 1}) == Rational(2, 5));
    CHECK(phi({0, 1}, {1, 0}) == Rational(-2, 5));
    CHECK(phi({3, 1}, {3, 1}) == 0);
}

TEST_CASE("act: identity and factor swap") {
    for (int k = 0; k < 20; ++k) {
        auto phi = random_skew(3);
        CHECK(act(OddSymplecticMatrix::identity(3), phi) == phi);
    }
    auto phi = SkewForm::rank_two(Rational(1, 3));
    auto swapped = act(OddSymplecticMatrix::swap(2), phi);
    CHECK(swapped == SkewForm::rank_two(Rational(-3)));
    CHECK(swapped == graph_image_oracle(OddSymplecticMatrix::swap(2), phi));
}

TEST_CASE("act: GL(d,Z) block embedding gives A^{-T} phi A^{-1}") {
    Matrix<Integer> a{{2, 1}, {1, 1}};
    auto g = OddSymplecticMatrix::embed_gl(a);
    CHECK(g.special());
    Matrix<Rational> aq{{2, 1}, {1, 1}};
    auto ainv = *aq.inverse();
    for (int k = 0; k < 20; ++k) {
        auto phi = random_skew(2);
        auto expected = ainv.transpose() * phi.entries() * ainv;
        CHECK(act(g, phi).entries() == expected);
        CHECK(act(g, phi) == graph_image_oracle(g, phi));
    }
}

TEST_CASE("act agrees with the vector-level oracle on random group elements") {
    int compared = 0;
    for (int k = 0; k < 200; ++k) {
        const std::size_t d = static_cast<std::size_t>(uniform(2, 3));
        auto g = random_group_element(d);
        auto phi = random_skew(d);
        auto image = try_act(g, phi);
        if (!image) continue;
        CHECK(*image == graph_image_oracle(g, phi));
        CHECK(graph_of(*image).isotropic());
        ++compared;
    }
    CHECK(compared > 100);
}

TEST_CASE("act is a partial group action") {
    int composed = 0;
    for (int k = 0; k < 1000; ++k) {
        const std::size_t d = static_cast<std::size_t>(uniform(1, 3));
        auto g1 = random_group_element(d);
        auto g2 = random_group_element(d);
        auto phi = random_skew(d);
        auto inner = try_act(g2, phi);
        if (!inner) continue;
        auto outer = try_act(g1, *inner);
        auto direct = try_act(g1 * g2, phi);
        REQUIRE(outer.has_value() == direct.has_value());
        if (outer) {
            CHECK(*outer == *direct);
            ++composed;
        }
    }
    CHECK(composed > 500);
}

TEST_CASE("chart failure is reported, not thrown, by try_act") {
    // swap sends the zero form off the chart of graphs
    CHECK_FALSE(try_act(OddSymplecticMatrix::swap(2), SkewForm::zero(2)).has_value());
    CHECK_THROWS_AS(act(OddSymplecticMatrix::swap(2), SkewForm::zero(2)), Error);
    try {
        act(OddSymplecticMatrix::swap(2), SkewForm::zero(2));
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::SingularGraphImage);
    }
}

TEST_CASE("standard generators") {
    SUBCASE("d = 1 is identity and the non-special swap") {
        auto gens = standard_generators(1);
        REQUIRE(gens.size() == 2);
        CHECK(gens[0] == OddSymplecticMatrix::identity(1));
        CHECK(gens[1] == OddSymplecticMatrix::swap(1));
        CHECK(gens[0].special());
        CHECK_FALSE(gens[1].special());
    }
    SUBCASE("d = 2 generators and composites preserve Q") {
        auto gens = standard_generators(2);
        bool has_swap = false, has_shear = false;
        for (const auto &g : gens) {
            CHECK(preserves_odd_form(g.matrix()));
            has_swap |= g == OddSymplecticMatrix::swap(2);
            has_shear |= g.b() == Matrix<Integer>{{0, 1}, {-1, 0}};
        }
        CHECK(has_swap);
        CHECK(has_shear);
        Matrix<Integer> n{{0, 1}, {-1, 0}};
        auto composite = OddSymplecticMatrix::shear(n) * OddSymplecticMatrix::swap(2);
        CHECK(preserves_odd_form(composite.matrix()));
        CHECK(composite.special());
    }
    SUBCASE("non-orthogonal matrices are rejected") {
        CHECK_THROWS_AS(OddSymplecticMatrix(Matrix<Integer>{{1, 1}, {0, 1}}), Error);
        CHECK_THROWS_AS(OddSymplecticMatrix::shear(Matrix<Integer>{{1, 0}, {0, 0}}), Error);
    }
}

TEST_CASE("inverse and orbit exploration") {
    for (int k = 0; k < 50; ++k) {
        auto g = random_group_element(3);
        CHECK(g * g.inverse() == OddSymplecticMatrix::identity(3));
    }
    // theta -> theta + 1 shear and theta -> -1/theta swap generate the modular orbit
    auto report = explore_orbit(SkewForm::rank_two(Rational(1, 3)), standard_generators(2), 2);
    CHECK(report.points.size() > 5);
    bool found = false;
    for (const auto &p : report.points) found |= p == SkewForm::rank_two(Rational(-3));
    CHECK(found);
    CHECK(report.chart_failures == 0);
}

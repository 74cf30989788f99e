#include "qtorus/fukaya.hpp"
#include "qtorus/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace qtorus {

namespace {

Rational det2(const Point2 &a, const Point2 &b) { return a[0] * b[1] - a[1] * b[0]; }

Point2 sub(const Point2 &a, const Point2 &b) { return {a[0] - b[0], a[1] - b[1]}; }

Point2 as_point(const std::array<std::int64_t, 2> &v) { return {Rational(v[0]), Rational(v[1])}; }

Point2 reduce(const Point2 &p) { return {frac(p[0]), frac(p[1])}; }

struct AffineLine {
    Point2 base;
    Point2 direction;
};

Point2 intersect(const AffineLine &a, const AffineLine &b) {
    const Rational s = det2(sub(b.base, a.base), b.direction) / det2(a.direction, b.direction);
    return {a.base[0] + s * a.direction[0], a.base[1] + s * a.direction[1]};
}

// lift number j of the line: offset + j u + t d with det(d, u) = 1
AffineLine lift(const FukayaLine &line, const Integer &j) {
    const auto [p, q] = line.direction;
    // extended gcd for p y - q x = 1
    std::int64_t old_r = p, r = q, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        const std::int64_t k = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - k * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - k * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - k * t);
    }
    // p old_s + q old_t = old_r = +-1, so u = (-old_t, old_s) * old_r
    const Point2 u{Rational(-old_t * old_r), Rational(old_s * old_r)};
    return {{line.offset[0] + j * u[0], line.offset[1] + j * u[1]}, as_point(line.direction)};
}

// t with b - a = t d
Rational signed_length(const Point2 &a, const Point2 &b, const Point2 &d) {
    const Point2 v = sub(b, a);
    return (v[0] * d[0] + v[1] * d[1]) / (d[0] * d[0] + d[1] * d[1]);
}

} // namespace

FukayaLine::FukayaLine(std::array<std::int64_t, 2> direction_, Point2 offset_, Rational holonomy_)
    : direction(direction_), offset(reduce(offset_)), holonomy(std::move(holonomy_)) {
    if (std::gcd(direction[0], direction[1]) != 1)
        throw Error(ErrorKind::InvalidArgument, "line direction must be a primitive vector");
}

Rational triangle_area(const Point2 &a, const Point2 &b, const Point2 &c, const Rational &omega) {
    return det2(sub(b, a), sub(c, a)) * omega / 2;
}

std::int64_t intersection_number(const FukayaLine &a, const FukayaLine &b) {
    return a.direction[0] * b.direction[1] - a.direction[1] * b.direction[0];
}

M2Series m2_series(const FukayaLine &l1, const FukayaLine &l2, const FukayaLine &l3, const GaussianRational &rho,
                   const Rational &area_cutoff) {
    const std::int64_t n12 = intersection_number(l1, l2), n23 = intersection_number(l2, l3),
                       n31 = intersection_number(l3, l1);
    if (n12 == 0 || n23 == 0 || n31 == 0) throw Error(ErrorKind::NotTransversal, "lines must be pairwise transversal");
    if (!(rho.im > 0)) throw Error(ErrorKind::InvalidArgument, "Im rho must be positive");

    std::map<PointTriple, std::vector<TriangleTerm>> grouped;
    const AffineLine ell1 = lift(l1, 0);
    const Point2 d1 = as_point(l1.direction), d2 = as_point(l2.direction), d3 = as_point(l3.direction);
    for (std::int64_t j = 0; j < std::abs(n12); ++j) {
        const AffineLine ell2 = lift(l2, j);
        const Point2 a = intersect(ell1, ell2);
        auto area_of = [&](const Integer &k) {
            const AffineLine ell3 = lift(l3, k);
            return triangle_area(a, intersect(ell2, ell3), intersect(ell3, ell1));
        };
        // area(k) = alpha (k - k0)^2: the triangle degenerates at a single k0
        const Rational a0 = area_of(0), ap = area_of(1), am = area_of(-1);
        const Rational alpha = (ap + am) / 2 - a0, beta = (ap - am) / 2;
        if (alpha == 0) continue;
        const Rational k0 = -beta / (2 * alpha);
        if (alpha < 0) {
            // every triangle is negatively oriented; only the degenerate one survives
            if (k0.get_den() != 1) continue;
        }
        const Real half_width = alpha > 0 ? std::sqrt(to_real(area_cutoff / alpha)) : 0;
        const Real centre = to_real(k0);
        const auto lo = static_cast<std::int64_t>(std::floor(centre - half_width)) - 1;
        const auto hi = static_cast<std::int64_t>(std::ceil(centre + half_width)) + 1;
        for (std::int64_t k = lo; k <= hi; ++k) {
            const AffineLine ell3 = lift(l3, k);
            const Point2 b = intersect(ell2, ell3), c = intersect(ell3, ell1);
            const Rational area = triangle_area(a, b, c);
            if (area < 0 || area > area_cutoff) continue;
            const Rational phase = l1.holonomy * signed_length(c, a, d1) + l2.holonomy * signed_length(a, b, d2) +
                                   l3.holonomy * signed_length(b, c, d3);
            grouped[{reduce(a), reduce(b), reduce(c)}].push_back({area, phase});
        }
    }

    M2Series series{{}, 0, 0};
    std::vector<Rational> areas;
    for (auto &[points, terms] : grouped) {
        std::sort(terms.begin(), terms.end(), [](const TriangleTerm &x, const TriangleTerm &y) {
            return x.area < y.area || (x.area == y.area && x.phase < y.phase);
        });
        Complex sum = 0;
        for (const auto &t : terms) {
            sum += exp_2pi_i(GaussianRational(t.phase) + rho * GaussianRational(t.area));
            areas.push_back(t.area);
        }
        series.entries.push_back({points, terms, sum});
    }
    std::sort(areas.begin(), areas.end());
    for (std::size_t i = 1; i < areas.size(); ++i)
        if (areas[i] != areas[i - 1] && (series.min_area_gap == 0 || areas[i] - areas[i - 1] < series.min_area_gap))
            series.min_area_gap = areas[i] - areas[i - 1];
    const Rational delta = series.min_area_gap == 0 ? area_cutoff : series.min_area_gap;
    const Real decay = 2 * std::numbers::pi_v<Real> * to_real(rho.im);
    series.tail_bound = std::exp(-decay * to_real(area_cutoff)) / (1 - std::exp(-decay * to_real(delta)));
    return series;
}

} // namespace qtorus

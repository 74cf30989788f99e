#pragma once

// Flat triangles on T^2 bounded by three affine lines and the m2 structure
// constant series sum w exp(2 pi i rho Area).

#include "qtorus/rational.hpp"

#include <array>
#include <map>

namespace qtorus {

using Point2 = std::array<Rational, 2>;

/// Line offset + t direction on T^2 with a rank-one unitary local system
/// of holonomy exp(2 pi i holonomy) along the primitive direction.
struct FukayaLine {
    FukayaLine(std::array<std::int64_t, 2> direction, Point2 offset, Rational holonomy = 0);

    std::array<std::int64_t, 2> direction;
    Point2 offset;
    Rational holonomy;
};

/// Signed shoelace area of (a, b, c) times omega.
Rational triangle_area(const Point2 &a, const Point2 &b, const Point2 &c, const Rational &omega = 1);

struct TriangleTerm {
    Rational area;
    /// Sum of holonomy * signed side length, so the weight is exp(2 pi i phase).
    Rational phase;
};

/// Intersection points L1 n L2, L2 n L3, L3 n L1, each reduced mod Z^2.
using PointTriple = std::array<Point2, 3>;

struct M2Entry {
    PointTriple points;
    /// Sorted by area.
    std::vector<TriangleTerm> terms;
    Complex partial_sum;
};

struct M2Series {
    std::vector<M2Entry> entries;
    Real tail_bound;
    Rational min_area_gap;
};

std::int64_t intersection_number(const FukayaLine &a, const FukayaLine &b);

/// Throws NotTransversal if two directions are parallel.
M2Series m2_series(const FukayaLine &l1, const FukayaLine &l2, const FukayaLine &l3, const GaussianRational &rho,
                   const Rational &area_cutoff);

} // namespace qtorus

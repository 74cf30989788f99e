#pragma once

// Lattices, skew forms, the odd symplectic space V_L = L_R + L_R^* and the
// action of the integral orthogonal group O(d,d,Z) on quantum torus parameters.

#include "qtorus/matrix.hpp"
#include "qtorus/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qtorus {

/// Skew form phi on L_R in a chosen basis: entries(i, j) = phi(e_i, e_j).
class SkewForm {
public:
    SkewForm() = default;
    explicit SkewForm(Matrix<Rational> entries);

    /// Rank-2 form with phi(e_1, e_2) = theta.
    static SkewForm rank_two(const Rational &theta);
    static SkewForm zero(std::size_t d);

    std::size_t dim() const noexcept { return entries_.rows(); }
    const Matrix<Rational> &entries() const noexcept { return entries_; }
    const Rational &operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

    /// phi(x, y) for lattice vectors.
    Rational operator()(const LatticeVector &x, const LatticeVector &y) const;

    /// The map x -> phi(x, .) as a matrix acting on column vectors.
    Matrix<Rational> as_map() const { return entries_.transpose(); }

    friend bool operator==(const SkewForm &a, const SkewForm &b) { return a.entries_ == b.entries_; }
    friend bool operator<(const SkewForm &a, const SkewForm &b);

private:
    Matrix<Rational> entries_;
};

std::string to_string(const SkewForm &phi);

/// Element g = [[A, B], [C, D]] of O(d,d,Z), the integral automorphisms of
/// V_L preserving Q((x1,l1),(x2,l2)) = l1(x2) + l2(x1).
class OddSymplecticMatrix {
public:
    /// Throws InvalidArgument unless g^T J g = J.
    explicit OddSymplecticMatrix(Matrix<Integer> g);

    static OddSymplecticMatrix identity(std::size_t d);
    /// The factor swap [[0, I], [I, 0]].
    static OddSymplecticMatrix swap(std::size_t d);
    /// diag(A, A^{-T}) for A in GL(d, Z).
    static OddSymplecticMatrix embed_gl(const Matrix<Integer> &a);
    /// [[I, N], [0, I]] with N integral and skew.
    static OddSymplecticMatrix shear(const Matrix<Integer> &n);
    /// [[I, 0], [N, I]] with N integral and skew.
    static OddSymplecticMatrix lower_shear(const Matrix<Integer> &n);

    std::size_t dim() const noexcept { return g_.rows() / 2; }
    const Matrix<Integer> &matrix() const noexcept { return g_; }
    Matrix<Integer> a() const { return g_.block(0, 0, dim(), dim()); }
    Matrix<Integer> b() const { return g_.block(0, dim(), dim(), dim()); }
    Matrix<Integer> c() const { return g_.block(dim(), 0, dim(), dim()); }
    Matrix<Integer> d() const { return g_.block(dim(), dim(), dim(), dim()); }

    /// det(g) = +1, i.e. g lies in SO(d,d,Z).
    bool special() const noexcept { return special_; }

    /// J g^T J, the inverse within O(d,d).
    OddSymplecticMatrix inverse() const;

    friend OddSymplecticMatrix operator*(const OddSymplecticMatrix &x, const OddSymplecticMatrix &y) {
        return OddSymplecticMatrix(x.g_ * y.g_);
    }
    friend bool operator==(const OddSymplecticMatrix &x, const OddSymplecticMatrix &y) { return x.g_ == y.g_; }

private:
    Matrix<Integer> g_;
    bool special_ = true;
};

/// The 2d x 2d Gram matrix J of Q.
Matrix<Integer> odd_form(std::size_t d);

/// True when g^T J g = J.
bool preserves_odd_form(const Matrix<Integer> &g);

/// Q(v, w) = l1(x2) + l2(x1) for v = (x1, l1), w = (x2, l2).
Rational odd_pairing(const std::vector<Rational> &v, const std::vector<Rational> &w);

struct LagrangianGraph {
    SkewForm source;
    std::vector<std::vector<Rational>> basis; // d vectors of length 2d

    bool isotropic() const;
    std::size_t dimension() const;
};

LagrangianGraph graph_of(const SkewForm &phi);

/// phi' with graph(phi') = g . graph(phi): Phi' = (C + D Phi)(A + B Phi)^{-1}
/// in terms of the maps Phi = phi(x, .). nullopt when A + B Phi is singular,
/// i.e. the image Lagrangian is not a graph over L_R.
std::optional<SkewForm> try_act(const OddSymplecticMatrix &g, const SkewForm &phi);

/// As try_act, throwing SingularGraphImage off the chart.
SkewForm act(const OddSymplecticMatrix &g, const SkewForm &phi);

/// Identity, the factor swap, GL(d,Z) elementary embeddings and elementary
/// skew shears. For d = 1 this is {identity, swap}.
std::vector<OddSymplecticMatrix> standard_generators(std::size_t d);

struct OrbitReport {
    std::vector<SkewForm> points; // in discovery order, start first
    std::vector<int> depth;
    std::size_t chart_failures = 0;
};

/// Breadth-first walk over words of length <= max_depth in the generators
/// and their inverses; edges leaving the chart of graphs are counted and skipped.
OrbitReport explore_orbit(const SkewForm &start, const std::vector<OddSymplecticMatrix> &generators, int max_depth);

} // namespace qtorus

#include "qtorus/lattice.hpp"

#include <map>
#include <queue>

namespace qtorus {

namespace {

Matrix<Rational> to_rational(const Matrix<Integer> &m) {
    Matrix<Rational> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

} // namespace

SkewForm::SkewForm(Matrix<Rational> entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
        throw Error(ErrorKind::InvalidArgument, "skew form must be a non-empty square matrix");
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j)
            if (entries_(i, j) != -entries_(j, i))
                throw Error(ErrorKind::InvalidArgument, "skew form is not antisymmetric at (" + std::to_string(i) +
                                                            "," + std::to_string(j) + ")");
}

SkewForm SkewForm::rank_two(const Rational &theta) {
    Matrix<Rational> m(2, 2);
    m(0, 1) = theta;
    m(1, 0) = -theta;
    return SkewForm(m);
}

SkewForm SkewForm::zero(std::size_t d) { return SkewForm(Matrix<Rational>(d, d)); }

Rational SkewForm::operator()(const LatticeVector &x, const LatticeVector &y) const {
    Rational s = 0;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < dim(); ++j) {
            if (y[j] == 0 || i == j) continue;
            s += entries_(i, j) * Rational(static_cast<long>(x[i]) * static_cast<long>(y[j]));
        }
    }
    return s;
}

bool operator<(const SkewForm &a, const SkewForm &b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i + 1; j < a.dim(); ++j) {
            if (a(i, j) < b(i, j)) return true;
            if (b(i, j) < a(i, j)) return false;
        }
    return false;
}

std::string to_string(const SkewForm &phi) {
    std::string out = "[";
    for (std::size_t i = 0; i < phi.dim(); ++i) {
        out += i ? ",[" : "[";
        for (std::size_t j = 0; j < phi.dim(); ++j) out += (j ? "," : "") + to_string(phi(i, j));
        out += "]";
    }
    return out + "]";
}

Matrix<Integer> odd_form(std::size_t d) {
    Matrix<Integer> j(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i) {
        j(i, d + i) = 1;
        j(d + i, i) = 1;
    }
    return j;
}

bool preserves_odd_form(const Matrix<Integer> &g) {
    if (g.rows() != g.cols() || g.rows() % 2 != 0) return false;
    const auto j = odd_form(g.rows() / 2);
    return g.transpose() * j * g == j;
}

OddSymplecticMatrix::OddSymplecticMatrix(Matrix<Integer> g) : g_(std::move(g)) {
    if (!preserves_odd_form(g_)) throw Error(ErrorKind::InvalidArgument, "matrix does not preserve Q");
    special_ = to_rational(g_).determinant() == 1;
}

OddSymplecticMatrix OddSymplecticMatrix::identity(std::size_t d) {
    return OddSymplecticMatrix(Matrix<Integer>::identity(2 * d));
}

OddSymplecticMatrix OddSymplecticMatrix::swap(std::size_t d) { return OddSymplecticMatrix(odd_form(d)); }

OddSymplecticMatrix OddSymplecticMatrix::embed_gl(const Matrix<Integer> &a) {
    const std::size_t d = a.rows();
    Matrix<Rational> aq(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) aq(i, j) = a(i, j);
    auto inv = aq.inverse();
    if (!inv) throw Error(ErrorKind::InvalidArgument, "block is singular");
    Matrix<Integer> g(2 * d, 2 * d);
    g.set_block(0, 0, a);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const Rational &x = (*inv)(j, i); // A^{-T}
            if (x.get_den() != 1) throw Error(ErrorKind::InvalidArgument, "block is not in GL(d,Z)");
            g(d + i, d + j) = x.get_num();
        }
    return OddSymplecticMatrix(g);
}

OddSymplecticMatrix OddSymplecticMatrix::shear(const Matrix<Integer> &n) {
    const std::size_t d = n.rows();
    Matrix<Integer> g = Matrix<Integer>::identity(2 * d);
    g.set_block(0, d, n);
    return OddSymplecticMatrix(g);
}

OddSymplecticMatrix OddSymplecticMatrix::lower_shear(const Matrix<Integer> &n) {
    const std::size_t d = n.rows();
    Matrix<Integer> g = Matrix<Integer>::identity(2 * d);
    g.set_block(d, 0, n);
    return OddSymplecticMatrix(g);
}

OddSymplecticMatrix OddSymplecticMatrix::inverse() const {
    const auto j = odd_form(dim());
    return OddSymplecticMatrix(j * g_.transpose() * j);
}

Rational odd_pairing(const std::vector<Rational> &v, const std::vector<Rational> &w) {
    const std::size_t d = v.size() / 2;
    Rational s = 0;
    for (std::size_t i = 0; i < d; ++i) s += v[d + i] * w[i] + w[d + i] * v[i];
    return s;
}

bool LagrangianGraph::isotropic() const {
    for (const auto &v : basis)
        for (const auto &w : basis)
            if (odd_pairing(v, w) != 0) return false;
    return true;
}

std::size_t LagrangianGraph::dimension() const {
    if (basis.empty()) return 0;
    Matrix<Rational> m(basis.size(), basis.front().size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis[i].size(); ++j) m(i, j) = basis[i][j];
    return m.rank();
}

LagrangianGraph graph_of(const SkewForm &phi) {
    const std::size_t d = phi.dim();
    const auto map = phi.as_map();
    LagrangianGraph g{phi, {}};
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<Rational> v(2 * d);
        v[k] = 1;
        for (std::size_t i = 0; i < d; ++i) v[d + i] = map(i, k);
        g.basis.push_back(std::move(v));
    }
    return g;
}

std::optional<SkewForm> try_act(const OddSymplecticMatrix &g, const SkewForm &phi) {
    if (g.dim() != phi.dim()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch between g and phi");
    const auto map = phi.as_map();
    const auto denom = to_rational(g.a()) + to_rational(g.b()) * map;
    auto inv = denom.inverse();
    if (!inv) return std::nullopt;
    const auto image = (to_rational(g.c()) + to_rational(g.d()) * map) * *inv;
    return SkewForm(image.transpose());
}

SkewForm act(const OddSymplecticMatrix &g, const SkewForm &phi) {
    auto out = try_act(g, phi);
    if (!out) throw Error(ErrorKind::SingularGraphImage, "A + B Phi is singular; image is not a graph over L_R");
    return *out;
}

std::vector<OddSymplecticMatrix> standard_generators(std::size_t d) {
    if (d == 0) throw Error(ErrorKind::InvalidArgument, "rank must be positive");
    std::vector<OddSymplecticMatrix> gens{OddSymplecticMatrix::identity(d), OddSymplecticMatrix::swap(d)};
    if (d == 1) return gens;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            if (i == j) continue;
            auto t = Matrix<Integer>::identity(d);
            t(i, j) = 1;
            gens.push_back(OddSymplecticMatrix::embed_gl(t));
        }
    auto flip = Matrix<Integer>::identity(d);
    flip(0, 0) = -1;
    gens.push_back(OddSymplecticMatrix::embed_gl(flip));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            Matrix<Integer> n(d, d);
            n(i, j) = 1;
            n(j, i) = -1;
            gens.push_back(OddSymplecticMatrix::shear(n));
            gens.push_back(OddSymplecticMatrix::lower_shear(n));
        }
    return gens;
}

OrbitReport explore_orbit(const SkewForm &start, const std::vector<OddSymplecticMatrix> &generators, int max_depth) {
    std::vector<OddSymplecticMatrix> moves;
    for (const auto &g : generators) {
        moves.push_back(g);
        moves.push_back(g.inverse());
    }
    OrbitReport report;
    std::map<SkewForm, int> seen;
    std::queue<std::pair<SkewForm, int>> frontier;
    seen.emplace(start, 0);
    report.points.push_back(start);
    report.depth.push_back(0);
    frontier.emplace(start, 0);
    while (!frontier.empty()) {
        auto [phi, depth] = frontier.front();
        frontier.pop();
        if (depth == max_depth) continue;
        for (const auto &g : moves) {
            auto next = try_act(g, phi);
            if (!next) {
                ++report.chart_failures;
                continue;
            }
            if (seen.emplace(*next, depth + 1).second) {
                report.points.push_back(*next);
                report.depth.push_back(depth + 1);
                frontier.emplace(*next, depth + 1);
            }
        }
    }
    return report;
}

} // namespace qtorus

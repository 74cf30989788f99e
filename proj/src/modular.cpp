#include "qtorus/modular.hpp"
#include "qtorus/matrix.hpp"

#include <algorithm>
#include <numeric>

namespace qtorus {

QSeries::QSeries(std::vector<Rational> coefficients) : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty()) throw Error(ErrorKind::InvalidArgument, "series needs at least one coefficient");
}

QSeries QSeries::zero(std::size_t order) { return QSeries(std::vector<Rational>(order + 1, Rational(0))); }

QSeries QSeries::one(std::size_t order) {
    QSeries s = zero(order);
    s.coefficients_[0] = 1;
    return s;
}

QSeries QSeries::truncated(std::size_t order) const {
    if (order > this->order()) throw Error(ErrorKind::InvalidArgument, "cannot extend a truncated series");
    return QSeries(std::vector<Rational>(coefficients_.begin(), coefficients_.begin() + static_cast<long>(order) + 1));
}

QSeries QSeries::scaled(const Rational &c) const {
    QSeries s = *this;
    for (auto &x : s.coefficients_) x *= c;
    return s;
}

QSeries QSeries::q_derivative() const {
    QSeries s = *this;
    for (std::size_t n = 0; n < s.coefficients_.size(); ++n) s.coefficients_[n] *= static_cast<long>(n);
    return s;
}

QSeries operator+(const QSeries &a, const QSeries &b) {
    QSeries s = QSeries::zero(std::min(a.order(), b.order()));
    for (std::size_t n = 0; n <= s.order(); ++n) s.coefficients_[n] = a[n] + b[n];
    return s;
}

QSeries operator-(const QSeries &a, const QSeries &b) { return a + b.scaled(-1); }

QSeries operator*(const QSeries &a, const QSeries &b) {
    QSeries s = QSeries::zero(std::min(a.order(), b.order()));
    for (std::size_t i = 0; i <= s.order(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j <= s.order(); ++j) s.coefficients_[i + j] += a[i] * b[j];
    }
    return s;
}

QSeries eisenstein(int k, std::size_t order) {
    long factor;
    switch (k) {
    case 2: factor = -24; break;
    case 4: factor = 240; break;
    case 6: factor = -504; break;
    default: throw Error(ErrorKind::UnsupportedWeight, "Eisenstein series of weight " + std::to_string(k));
    }
    if (order < 1) throw Error(ErrorKind::InvalidArgument, "order must be at least 1");
    std::vector<Rational> c(order + 1, Rational(0));
    c[0] = 1;
    // sigma_{k-1}(n) by a divisor sieve
    for (std::size_t m = 1; m <= order; ++m) {
        Integer p;
        mpz_ui_pow_ui(p.get_mpz_t(), m, static_cast<unsigned long>(k - 1));
        for (std::size_t n = m; n <= order; n += m) c[n] += p;
    }
    for (std::size_t n = 1; n <= order; ++n) c[n] *= factor;
    return QSeries(std::move(c));
}

std::vector<Partition> partitions(std::size_t d) {
    std::vector<Partition> out;
    Partition current;
    auto rec = [&](auto &&self, long remaining, long largest) -> void {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (long part = std::min(remaining, largest); part >= 1; --part) {
            current.push_back(part);
            self(self, remaining - part, part);
            current.pop_back();
        }
    };
    rec(rec, static_cast<long>(d), static_cast<long>(d));
    return out;
}

Rational transposition_character(const Partition &lambda) {
    Rational f = 0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const long l = lambda[i];
        f += Rational(l * (l - 2 * static_cast<long>(i + 1) + 1)) / 2;
    }
    return f;
}

BivariateSeries::BivariateSeries(std::size_t order_, std::size_t max_b_)
    : order(order_), max_b(max_b_), c(order_ + 1, std::vector<Rational>(max_b_ + 1, Rational(0))) {}

namespace {

using Poly = std::vector<Rational>;

// a += s * b * c, truncated
void add_product(Poly &a, const Rational &s, const Poly &b, const Poly &c) {
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] == 0) continue;
        for (std::size_t j = 0; i + j < a.size(); ++j) a[i + j] += s * b[i] * c[j];
    }
}

bool is_constant(const Poly &p, long value) {
    if (p[0] != value) return false;
    return std::all_of(p.begin() + 1, p.end(), [](const Rational &x) { return x == 0; });
}

Poly exp_row(const Rational &f, std::size_t max_b) {
    Poly row(max_b + 1);
    Rational term = 1;
    for (std::size_t b = 0; b <= max_b; ++b) {
        row[b] = term;
        term *= f;
        term /= static_cast<long>(b + 1);
    }
    return row;
}

Rational factorial(long n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(f);
}

} // namespace

BivariateSeries disconnected_bivariate(std::size_t order, std::size_t max_b, Execution ex) {
    BivariateSeries z(order, max_b);
    const long n = static_cast<long>(order);
    auto fill = [&](long d) {
        Poly &row = z.c[static_cast<std::size_t>(d)];
        for (const auto &lambda : partitions(static_cast<std::size_t>(d))) {
            const Poly e = exp_row(transposition_character(lambda), max_b);
            for (std::size_t b = 0; b <= max_b; ++b) row[b] += e[b];
        }
    };
    if (ex == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long d = n; d >= 0; --d) fill(d);
    } else {
        for (long d = 0; d <= n; ++d) fill(d);
    }
    return z;
}

BivariateSeries log_series(const BivariateSeries &z) {
    if (!is_constant(z.c[0], 1)) throw Error(ErrorKind::InvalidArgument, "logarithm needs constant term 1");
    // d F_d = d Z_d - sum_{j < d} Z_{d-j} j F_j
    BivariateSeries f(z.order, z.max_b);
    for (std::size_t d = 1; d <= z.order; ++d) {
        Poly acc(z.max_b + 1);
        for (std::size_t b = 0; b <= z.max_b; ++b) acc[b] = z.c[d][b] * static_cast<long>(d);
        for (std::size_t j = 1; j < d; ++j) add_product(acc, Rational(-static_cast<long>(j)), f.c[j], z.c[d - j]);
        for (std::size_t b = 0; b <= z.max_b; ++b) f.c[d][b] = acc[b] / static_cast<long>(d);
    }
    return f;
}

BivariateSeries exp_series(const BivariateSeries &f) {
    if (!is_constant(f.c[0], 0)) throw Error(ErrorKind::InvalidArgument, "exponential needs constant term 0");
    // d Z_d = sum_{j <= d} j F_j Z_{d-j}
    BivariateSeries z(f.order, f.max_b);
    z.c[0][0] = 1;
    for (std::size_t d = 1; d <= f.order; ++d) {
        Poly acc(f.max_b + 1);
        for (std::size_t j = 1; j <= d; ++j) add_product(acc, Rational(static_cast<long>(j)), f.c[j], z.c[d - j]);
        for (std::size_t b = 0; b <= f.max_b; ++b) z.c[d][b] = acc[b] / static_cast<long>(d);
    }
    return z;
}

QSeries covers_series(long genus, std::size_t order, bool connected, bool track_branch_points, Execution ex) {
    if (genus < 2) throw Error(ErrorKind::InvalidArgument, "genus must be at least 2");
    if (order < 1) throw Error(ErrorKind::InvalidArgument, "order must be at least 1");
    const std::size_t b = static_cast<std::size_t>(2 * genus - 2);
    BivariateSeries z = disconnected_bivariate(order, b, ex);
    if (connected) z = log_series(z);
    const Rational scale = track_branch_points ? factorial(static_cast<long>(b)) : Rational(1);
    std::vector<Rational> c(order + 1, Rational(0));
    for (std::size_t d = 1; d <= order; ++d) c[d] = z.c[d][b] * scale;
    return QSeries(std::move(c));
}

namespace {

using Perm = std::array<std::uint8_t, 5>;

Perm compose(const Perm &x, const Perm &y, int d) {
    Perm r{};
    for (int i = 0; i < d; ++i) r[i] = x[y[i]];
    return r;
}

Perm inverse(const Perm &x, int d) {
    Perm r{};
    for (int i = 0; i < d; ++i) r[x[i]] = static_cast<std::uint8_t>(i);
    return r;
}

struct Orbits {
    std::array<int, 5> parent;
    explicit Orbits(int d) { std::iota(parent.begin(), parent.begin() + d, 0); }
    int find(int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); }
    void join(const Perm &p, int d) {
        for (int i = 0; i < d; ++i) parent[find(i)] = find(p[i]);
    }
    bool transitive(int d) {
        for (int i = 1; i < d; ++i)
            if (find(i) != find(0)) return false;
        return true;
    }
};

long long count_for_pair(const Perm &a, const Perm &b, const std::vector<Perm> &transpositions, int d, int nb) {
    const Perm comm = compose(compose(a, b, d), compose(inverse(a, d), inverse(b, d), d), d);
    long long count = 0;
    std::vector<const Perm *> chosen(static_cast<std::size_t>(std::max(nb - 1, 0)));
    auto rec = [&](auto &&self, int depth, const Perm &prod) -> void {
        if (depth + 1 >= nb) {
            // the last tau is forced to be prod^{-1}
            int moved = 0;
            for (int i = 0; i < d; ++i) moved += prod[i] != i;
            const bool ok = nb == 0 ? moved == 0 : moved == 2;
            if (!ok) return;
            Orbits orbits(d);
            orbits.join(a, d);
            orbits.join(b, d);
            for (const Perm *t : chosen) orbits.join(*t, d);
            if (orbits.transitive(d)) ++count;
            return;
        }
        for (const Perm &t : transpositions) {
            chosen[static_cast<std::size_t>(depth)] = &t;
            self(self, depth + 1, compose(prod, t, d));
        }
    };
    rec(rec, 0, comm);
    return count;
}

} // namespace

Rational brute_force_covers(long genus, long degree, Execution ex) {
    if (genus < 1 || degree < 1) throw Error(ErrorKind::InvalidArgument, "genus and degree must be positive");
    if (degree > 5 || genus > 3) throw Error(ErrorKind::TooLarge, "brute force is limited to d <= 5, g <= 3");
    const int d = static_cast<int>(degree), nb = static_cast<int>(2 * genus - 2);
    std::vector<Perm> perms, transpositions;
    Perm p{};
    std::iota(p.begin(), p.begin() + d, 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.begin() + d));
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            Perm t{};
            std::iota(t.begin(), t.begin() + d, 0);
            std::swap(t[i], t[j]);
            transpositions.push_back(t);
        }
    const long pairs = static_cast<long>(perms.size() * perms.size());
    const auto np = static_cast<long>(perms.size());
    long long total = 0;
    if (ex == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : total)
        for (long k = 0; k < pairs; ++k) total += count_for_pair(perms[k / np], perms[k % np], transpositions, d, nb);
    } else {
        for (long k = 0; k < pairs; ++k) total += count_for_pair(perms[k / np], perms[k % np], transpositions, d, nb);
    }
    return Rational(Integer(static_cast<long>(total))) / factorial(degree);
}

QuasiModularBasis::QuasiModularBasis(std::size_t weight_) : weight(weight_) {
    if (weight % 2) throw Error(ErrorKind::InvalidArgument, "quasi-modular weight must be even");
    for (std::size_t a = weight / 2 + 1; a-- > 0;)
        for (std::size_t b = (weight - 2 * a) / 4 + 1; b-- > 0;) {
            const std::size_t rest = weight - 2 * a - 4 * b;
            if (rest % 6 == 0) monomials.push_back({a, b, rest / 6});
        }
}

QSeries QuasiModularBasis::evaluate(std::size_t i, std::size_t order) const {
    const auto &m = monomials.at(i);
    QSeries out = QSeries::one(order);
    const int weights[3] = {2, 4, 6};
    for (int k = 0; k < 3; ++k) {
        if (m[k] == 0) continue;
        const QSeries e = eisenstein(weights[k], order);
        for (std::size_t j = 0; j < m[k]; ++j) out = out * e;
    }
    return out;
}

NoSolutionError::NoSolutionError(std::size_t index, Rational expected_, Rational reconstructed_)
    : Error(ErrorKind::NoSolution, "coefficient of q^" + std::to_string(index) + " is " + to_string(expected_) +
                                       ", best fit gives " + to_string(reconstructed_)),
      mismatch_index(index), expected(std::move(expected_)), reconstructed(std::move(reconstructed_)) {}

Decomposition quasimodular_decompose(const QSeries &f, std::size_t weight) {
    QuasiModularBasis basis(weight);
    const std::size_t dim = basis.size(), order = f.order();
    if (order < dim + 8)
        throw Error(ErrorKind::InvalidArgument, "order " + std::to_string(order) + " is below the basis size plus 8");
    std::vector<QSeries> columns;
    for (std::size_t i = 0; i < dim; ++i) columns.push_back(basis.evaluate(i, order));

    // first dim independent coefficient equations
    std::vector<std::size_t> rows;
    Matrix<Rational> picked(0, dim);
    for (std::size_t n = 0; n <= order && rows.size() < dim; ++n) {
        Matrix<Rational> trial(rows.size() + 1, dim);
        trial.set_block(0, 0, picked);
        for (std::size_t i = 0; i < dim; ++i) trial(rows.size(), i) = columns[i][n];
        if (trial.rank() == rows.size() + 1) {
            rows.push_back(n);
            picked = trial;
        }
    }
    if (rows.size() < dim) throw Error(ErrorKind::InvalidArgument, "basis is degenerate at this order");
    const Matrix<Rational> inv = *picked.inverse();
    std::vector<Rational> x(dim, Rational(0));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) x[i] += inv(i, j) * f[rows[j]];

    for (std::size_t n = 0; n <= order; ++n) {
        Rational fit = 0;
        for (std::size_t i = 0; i < dim; ++i) fit += x[i] * columns[i][n];
        if (fit != f[n]) throw NoSolutionError(n, f[n], fit);
    }
    Decomposition out{basis, {}, order + 1 - dim};
    for (std::size_t i = 0; i < dim; ++i)
        if (x[i] != 0) out.coefficients.emplace(basis.monomials[i], x[i]);
    return out;
}

} // namespace qtorus

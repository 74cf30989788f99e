#pragma once

// Exact q-series, Eisenstein series, simply branched covers of an elliptic
// curve, and decomposition in Q[E2, E4, E6].

#include "qtorus/error.hpp"
#include "qtorus/execution.hpp"
#include "qtorus/rational.hpp"

#include <array>
#include <map>
#include <vector>

namespace qtorus {

/// Truncated power series sum_{n <= order} a_n q^n with rational coefficients.
class QSeries {
public:
    explicit QSeries(std::vector<Rational> coefficients);
    static QSeries zero(std::size_t order);
    static QSeries one(std::size_t order);

    std::size_t order() const noexcept { return coefficients_.size() - 1; }
    const Rational &operator[](std::size_t n) const { return coefficients_.at(n); }
    const std::vector<Rational> &coefficients() const noexcept { return coefficients_; }

    QSeries truncated(std::size_t order) const;
    QSeries scaled(const Rational &c) const;
    /// q d/dq.
    QSeries q_derivative() const;

    friend QSeries operator+(const QSeries &a, const QSeries &b);
    friend QSeries operator-(const QSeries &a, const QSeries &b);
    friend QSeries operator*(const QSeries &a, const QSeries &b);
    friend bool operator==(const QSeries &a, const QSeries &b) = default;

private:
    std::vector<Rational> coefficients_;
};

/// E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n for k in {2, 4, 6}.
QSeries eisenstein(int k, std::size_t order);

/// Weakly decreasing positive parts.
using Partition = std::vector<long>;

std::vector<Partition> partitions(std::size_t d);

/// |C_tau| chi_lambda(tau) / dim lambda = sum_i lambda_i (lambda_i - 2i + 1) / 2, i from 1.
Rational transposition_character(const Partition &lambda);

/// sum c(d, b) q^d y^b, truncated at q^order and y^max_b.
struct BivariateSeries {
    std::size_t order, max_b;
    std::vector<std::vector<Rational>> c;

    BivariateSeries(std::size_t order, std::size_t max_b);
    const Rational &coefficient(std::size_t d, std::size_t b) const { return c.at(d).at(b); }
    friend bool operator==(const BivariateSeries &, const BivariateSeries &) = default;
};

/// sum_d q^d sum_{lambda |- d} exp(y f(lambda)): covers of any connectivity with
/// b labeled simple branch points weighted by y^b / b! and 1 / |Aut|.
BivariateSeries disconnected_bivariate(std::size_t order, std::size_t max_b, Execution ex = Execution::parallel);

/// Formal logarithm; requires constant term 1.
BivariateSeries log_series(const BivariateSeries &z);
/// Formal exponential; requires constant term 0.
BivariateSeries exp_series(const BivariateSeries &f);

/// F_g = sum_d N_{g,d} q^d with N_{g,d} = (#{(a, b, tau_1..tau_{2g-2}) in S_d :
/// [a, b] tau_1 ... tau_{2g-2} = 1, transitive}) / d!. With track_branch_points
/// false the branch points are unlabeled and counts are divided by (2g - 2)!.
QSeries covers_series(long genus, std::size_t order, bool connected = true, bool track_branch_points = true,
                      Execution ex = Execution::parallel);

/// Direct enumeration over S_d; d <= 5 and g <= 3, else TooLarge.
Rational brute_force_covers(long genus, long degree, Execution ex = Execution::parallel);

/// Exponents (a, b, c) of E2^a E4^b E6^c.
using QuasiModularMonomial = std::array<std::size_t, 3>;

struct QuasiModularBasis {
    /// Even weight >= 0; ordered by decreasing a, then decreasing b.
    explicit QuasiModularBasis(std::size_t weight);

    std::size_t weight;
    std::vector<QuasiModularMonomial> monomials;

    std::size_t size() const noexcept { return monomials.size(); }
    QSeries evaluate(std::size_t i, std::size_t order) const;
};

struct Decomposition {
    QuasiModularBasis basis;
    /// Nonzero coefficients only.
    std::map<QuasiModularMonomial, Rational> coefficients;
    /// Coefficient equations beyond the basis size, all satisfied.
    std::size_t surplus_equations;
};

class NoSolutionError : public Error {
public:
    NoSolutionError(std::size_t index, Rational expected, Rational reconstructed);

    std::size_t mismatch_index;
    Rational expected, reconstructed;
};

/// Requires order >= dim + 8. Throws NoSolutionError with the first mismatching
/// q-power when no combination reproduces every coefficient.
Decomposition quasimodular_decompose(const QSeries &f, std::size_t weight);

} // namespace qtorus

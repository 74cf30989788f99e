#pragma once

// Dedekind sums s(p, q).

#include "qtorus/execution.hpp"
#include "qtorus/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qtorus {

struct CoprimePair {
    /// q >= 1 and gcd(|p|, q) = 1; p = 0 only with q = 1.
    CoprimePair(long p, long q);

    long p, q;
};

/// sum_{k=1}^{q-1} ((k/q)) ((kp/q)); zero for q = 1.
Rational dedekind_direct(const CoprimePair &pair);

/// Euclidean recursion on s(p, q) + s(q, p) = P(p, q), s(p + nq, q) = s(p, q).
Rational dedekind_recursive(const CoprimePair &pair);

/// s(x) for x = p / q in lowest terms.
Rational dedekind(const Rational &x);

/// (p^2 + q^2 + 1 - 3pq) / 12pq, p != 0.
Rational reciprocity_rhs(long p, long q);

struct DedekindWitness {
    std::string identity;
    long p, q;
};

/// For x = p/q with coprime 1 <= p < q <= range (and x = 1):
///   direct = recursive, s(x + 1) = s(x), s(-x) = -s(x),
///   s(p, q) + s(q, p) = P(p, q), s(-1/x) = s(x) - P(x).
/// The variant s(-1/x) = s(x) + P(x) is counted separately.
struct DedekindReport {
    std::size_t pairs_checked = 0;
    std::vector<DedekindWitness> failures;
    std::size_t plus_sign_failures = 0;
    std::optional<DedekindWitness> plus_sign_witness;

    bool ok() const { return failures.empty(); }
};

DedekindReport boundary_modularity_check(long range, Execution ex = Execution::parallel);

} // namespace qtorus

#include "qtorus/dedekind.hpp"
#include "qtorus/error.hpp"

#include <algorithm>
#include <numeric>

namespace qtorus {

CoprimePair::CoprimePair(long p_, long q_) : p(p_), q(q_) {
    if (q < 1) throw Error(ErrorKind::InvalidArgument, "q must be positive");
    if (std::gcd(p, q) != 1)
        throw Error(ErrorKind::InvalidArgument, std::to_string(p) + " and " + std::to_string(q) + " are not coprime");
}

namespace {

long mod(long a, long m) {
    const long r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace

Rational dedekind_direct(const CoprimePair &pair) {
    const long q = pair.q;
    if (q == 1) return 0;
    // ((k/q)) ((kp/q)) = (2k - q)(2r - q) / 4q^2 with r = kp mod q, never 0
    Integer total = 0;
    long long chunk = 0;
    const long p = mod(pair.p, q);
    long r = 0;
    for (long k = 1; k < q; ++k) {
        r += p;
        if (r >= q) r -= q;
        chunk += static_cast<long long>(2 * k - q) * (2 * r - q);
        if ((k & 0xfff) == 0) {
            total += static_cast<long>(chunk);
            chunk = 0;
        }
    }
    total += static_cast<long>(chunk);
    Rational s(total, Integer(4) * q * q);
    s.canonicalize();
    return s;
}

Rational reciprocity_rhs(long p, long q) {
    const Integer a = p, b = q;
    Rational r(a * a + b * b + 1 - 3 * a * b, 12 * a * b);
    r.canonicalize();
    return r;
}

Rational dedekind_recursive(const CoprimePair &pair) {
    long p = pair.p, q = pair.q;
    Rational acc = 0;
    int sign = 1;
    while (q > 1) {
        const long r = mod(p, q);
        acc += sign * reciprocity_rhs(r, q);
        sign = -sign;
        p = q;
        q = r;
    }
    return acc;
}

Rational dedekind(const Rational &x) {
    const Integer &num = x.get_num(), &den = x.get_den();
    if (!num.fits_slong_p() || !den.fits_slong_p()) throw Error(ErrorKind::TooLarge, "numerator or denominator");
    return dedekind_direct({num.get_si(), den.get_si()});
}

namespace {

void check_pair(long p, long q, DedekindReport &r) {
    ++r.pairs_checked;
    auto fail = [&](const char *identity) { r.failures.push_back({identity, p, q}); };
    const Rational s = dedekind_direct({p, q});
    const Rational big_p = reciprocity_rhs(p, q);
    if (dedekind_recursive({p, q}) != s) fail("direct = recursive");
    if (dedekind_direct({p + q, q}) != s) fail("s(x + 1) = s(x)");
    if (dedekind_direct({-p, q}) != -s) fail("s(-p, q) = -s(p, q)");
    if (s + dedekind_direct({q, p}) != big_p) fail("s(p, q) + s(q, p) = P(p, q)");
    const Rational inverted = dedekind_direct({-q, p});
    if (inverted != s - big_p) fail("s(-1/x) = s(x) - P(x)");
    if (inverted != s + big_p) {
        ++r.plus_sign_failures;
        if (!r.plus_sign_witness) r.plus_sign_witness = DedekindWitness{"s(-1/x) = s(x) + P(x)", p, q};
    }
}

void check_denominator(long q, DedekindReport &r) {
    if (q == 1) check_pair(1, 1, r);
    for (long p = 1; p < q; ++p)
        if (std::gcd(p, q) == 1) check_pair(p, q, r);
}

} // namespace

DedekindReport boundary_modularity_check(long range, Execution ex) {
    DedekindReport out;
    if (ex == Execution::serial) {
        for (long q = 1; q <= range; ++q) check_denominator(q, out);
        return out;
    }
    std::vector<DedekindReport> per_q(static_cast<std::size_t>(std::max(range, 0L)));
#pragma omp parallel for schedule(dynamic)
    for (long q = 1; q <= range; ++q) check_denominator(q, per_q[static_cast<std::size_t>(q - 1)]);
    for (auto &r : per_q) {
        out.pairs_checked += r.pairs_checked;
        out.failures.insert(out.failures.end(), r.failures.begin(), r.failures.end());
        out.plus_sign_failures += r.plus_sign_failures;
        if (!out.plus_sign_witness) out.plus_sign_witness = r.plus_sign_witness;
    }
    return out;
}

} // namespace qtorus

#include "qtorus/algebra.hpp"

#include <numbers>
#include <omp.h>

namespace qtorus {

int max_threads() { return omp_get_max_threads(); }

Complex PhaseRational::to_complex() const {
    constexpr Real two_pi = 2 * std::numbers::pi_v<Real>;
    // exact special cases keep i^k products exact in the numeric ring
    if (value_ == 0) return {1, 0};
    if (value_ == Rational(1, 4)) return {0, 1};
    if (value_ == Rational(1, 2)) return {-1, 0};
    if (value_ == Rational(3, 4)) return {0, -1};
    return std::polar<Real>(1, two_pi * to_real(value_));
}

Cyclotomic::Cyclotomic(const Rational &value) {
    if (value != 0) terms_.emplace(Rational(0), value);
}

Cyclotomic::Cyclotomic(const Rational &coefficient, const PhaseRational &phase) {
    if (coefficient != 0) terms_.emplace(phase.value(), coefficient);
}

void Cyclotomic::add(const Rational &phase, const Rational &coefficient) {
    if (coefficient == 0) return;
    auto [it, inserted] = terms_.try_emplace(phase, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == 0) terms_.erase(it);
    }
}

Cyclotomic &Cyclotomic::operator+=(const Cyclotomic &o) {
    for (const auto &[p, c] : o.terms_) add(p, c);
    return *this;
}

Cyclotomic operator-(const Cyclotomic &a) {
    Cyclotomic out = a;
    for (auto &[p, c] : out.terms_) c = -c;
    return out;
}

Cyclotomic operator*(const Cyclotomic &a, const Cyclotomic &b) {
    Cyclotomic out;
    for (const auto &[pa, ca] : a.terms_)
        for (const auto &[pb, cb] : b.terms_) out.add(frac(pa + pb), ca * cb);
    return out;
}

Cyclotomic Cyclotomic::conj() const {
    Cyclotomic out;
    for (const auto &[p, c] : terms_) out.add(frac(-p), c);
    return out;
}

Cyclotomic Cyclotomic::inverse() const {
    if (!is_monomial()) throw Error(ErrorKind::InvalidArgument, "only monomial cyclotomic values are inverted");
    const auto &[p, c] = *terms_.begin();
    return Cyclotomic(1 / c, PhaseRational(-p));
}

Complex Cyclotomic::to_complex() const {
    Complex z = 0;
    for (const auto &[p, c] : terms_) z += to_real(c) * PhaseRational(p).to_complex();
    return z;
}

Real Cyclotomic::magnitude_bound() const {
    Real s = 0;
    for (const auto &[p, c] : terms_) s += std::abs(to_real(c));
    return s;
}

std::string to_string(const Cyclotomic &c) {
    if (c.is_zero()) return "0";
    std::string out;
    for (const auto &[p, r] : c.terms()) {
        if (!out.empty()) out += " + ";
        out += to_string(r);
        if (p != 0) out += "*z(" + to_string(p) + ")";
    }
    return out;
}

template <class C>
QTorusElement<C> multiply(const QTorusElement<C> &x, const QTorusElement<C> &y, Execution execution) {
    QTorusElement<C>::require_same_phi(x, y);
    using Traits = CoefficientTraits<C>;
    const auto &phi = x.phi();
    if (execution == Execution::serial || x.size() < 2) {
        QTorusElement<C> out(phi);
        for (const auto &[m, a] : x.terms())
            for (const auto &[n, b] : y.terms()) out.add_term(m + n, Traits::phase(cocycle(phi, m, n)) * a * b);
        return out;
    }
    std::vector<std::pair<LatticeVector, C>> left(x.terms().begin(), x.terms().end());
    const int threads = max_threads();
    std::vector<QTorusElement<C>> partial(threads, QTorusElement<C>(phi));
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < left.size(); ++i) {
        auto &acc = partial[omp_get_thread_num()];
        const auto &[m, a] = left[i];
        for (const auto &[n, b] : y.terms()) acc.add_term(m + n, Traits::phase(cocycle(phi, m, n)) * a * b);
    }
    QTorusElement<C> out(phi);
    for (const auto &p : partial)
        for (const auto &[n, c] : p.terms()) out.add_term(n, c);
    return out;
}

template QTorusElement<Cyclotomic> multiply(const QTorusElement<Cyclotomic> &, const QTorusElement<Cyclotomic> &,
                                            Execution);
template QTorusElement<Complex> multiply(const QTorusElement<Complex> &, const QTorusElement<Complex> &, Execution);

Real gaussian_tail_bound(std::size_t d, Real decay, std::int64_t radius) {
    if (decay <= 0) throw Error(ErrorKind::InvalidArgument, "decay rate must be positive");
    Real inside = 0;
    for (std::int64_t n = -radius; n <= radius; ++n) inside += std::exp(-decay * static_cast<Real>(n * n));
    // both one-dimensional tails, bounded by a geometric series in consecutive ratios
    const Real r = static_cast<Real>(radius + 1);
    const Real tail = 2 * std::exp(-decay * r * r) / (1 - std::exp(-decay * (2 * r + 1)));
    // (inside + tail)^d - inside^d <= d tail (inside + tail)^(d-1), without cancellation
    return static_cast<Real>(d) * tail * std::pow(inside + tail, static_cast<Real>(d - 1));
}

NumericElement to_numeric(const ExactElement &x) {
    NumericElement out(x.phi());
    for (const auto &[n, c] : x.terms()) out.add_term(n, c.to_complex());
    return out;
}

} // namespace qtorus

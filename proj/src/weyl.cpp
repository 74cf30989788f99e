#include "qtorus/weyl.hpp"
#include "qtorus/error.hpp"

#include <Eigen/SVD>

namespace qtorus {

WeylLine::WeylLine(Rational alpha_, Rational beta_, Rational offset_)
    : alpha(std::move(alpha_)), beta(std::move(beta_)), offset(std::move(offset_)) {
    if (alpha == 0 && beta == 0) throw Error(ErrorKind::InvalidArgument, "line coefficients are both zero");
    const Rational scale = std::max(Rational(abs(alpha)), Rational(abs(beta)));
    alpha /= scale;
    beta /= scale;
    offset /= scale;
}

TruncatedCyclicModule module_of_line(const WeylLine &line, std::size_t cutoff, const Rational &hbar) {
    if (cutoff < 2) throw Error(ErrorKind::InvalidArgument, "cutoff must be at least 2");
    if (hbar <= 0) throw Error(ErrorKind::InvalidArgument, "hbar must be positive");
    const std::size_t n = cutoff + 1;
    TruncatedCyclicModule m{line, cutoff, hbar, Matrix<Rational>(n, n), Matrix<Rational>(n, n), {}, {}};
    for (std::size_t k = 0; k < n; ++k) {
        m.l(k, k) = line.offset;
        if (k > 0) m.l(k - 1, k) = -hbar * static_cast<long>(k);
        if (k + 1 < n) m.c(k + 1, k) = 1;
    }
    const Rational s = line.alpha * line.alpha + line.beta * line.beta;
    auto combine = [&](const Rational &a, const Rational &b) {
        Matrix<Rational> out(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(i, j) = a * m.l(i, j) + b * m.c(i, j);
        return out;
    };
    m.p = combine(line.alpha / s, line.beta);
    m.q = combine(line.beta / s, -line.alpha);
    return m;
}

Matrix<Rational> TruncatedCyclicModule::interior_commutator_defect() const {
    const Matrix<Rational> comm = p * q - q * p;
    Matrix<Rational> defect = comm.block(0, 0, cutoff, cutoff);
    for (std::size_t i = 0; i < cutoff; ++i) defect(i, i) -= hbar;
    return defect;
}

ExtAtCutoff ext_at_cutoff(const WeylLine &l1, const WeylLine &l2, std::size_t cutoff, const Rational &hbar) {
    if (cutoff < 4) throw Error(ErrorKind::InvalidArgument, "cutoff must be at least 4");
    // l1 = ((a1 a2 + b1 b2) / s2) l2 + (a1 b2 - b1 a2) c2
    const Rational s2 = l2.alpha * l2.alpha + l2.beta * l2.beta;
    const Rational along = (l1.alpha * l2.alpha + l1.beta * l2.beta) / s2;
    const Rational across = l1.alpha * l2.beta - l1.beta * l2.alpha;
    if (across == 0 && along * l2.offset != l1.offset)
        throw Error(ErrorKind::NonTransversal, "parallel distinct lines are outside the transversal hypothesis");

    // one extra basis vector so c^N -> c^{N+1} is not cut off
    const auto big = module_of_line(l2, cutoff + 1, hbar);
    const std::size_t domain = cutoff + 1;
    // filtered degree of l1 - lambda1 on W2: +1 across, -1 along only
    const std::size_t codomain = across != 0 ? cutoff + 2 : cutoff;
    Matrix<Rational> t(codomain, domain);
    for (std::size_t i = 0; i < codomain; ++i)
        for (std::size_t j = 0; j < domain; ++j) {
            t(i, j) = l1.alpha * big.p(i, j) + l1.beta * big.q(i, j);
            if (i == j) t(i, j) -= l1.offset;
        }
    ExtAtCutoff out{cutoff, 0, 0, t.rank(), 0, 0};
    out.ext0 = domain - out.rank;
    out.ext1 = codomain - out.rank;

    Eigen::MatrixXd numeric(codomain, domain);
    for (std::size_t i = 0; i < codomain; ++i)
        for (std::size_t j = 0; j < domain; ++j) numeric(i, j) = t(i, j).get_d();
    const Eigen::VectorXd sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(numeric).singularValues();
    for (Eigen::Index k = 0; k < sigma.size(); ++k)
        if (sigma(k) > 1e-8 * sigma(0)) ++out.numerical_rank;
    if (out.rank > 0) out.smallest_nonzero_singular_value = sigma(static_cast<Eigen::Index>(out.rank) - 1);
    return out;
}

ExtReport ext_dims(const WeylLine &l1, const WeylLine &l2, std::size_t cutoff, const Rational &hbar) {
    ExtReport r{0, 0, false, ext_at_cutoff(l1, l2, cutoff, hbar), ext_at_cutoff(l1, l2, 2 * cutoff, hbar)};
    r.stabilized = r.at_n.ext0 == r.at_2n.ext0 && r.at_n.ext1 == r.at_2n.ext1;
    if (!r.stabilized)
        throw Error(ErrorKind::NotStabilized, "cutoff " + std::to_string(cutoff) + " gives (" +
                                                  std::to_string(r.at_n.ext0) + "," + std::to_string(r.at_n.ext1) +
                                                  "), cutoff " + std::to_string(2 * cutoff) + " gives (" +
                                                  std::to_string(r.at_2n.ext0) + "," + std::to_string(r.at_2n.ext1) +
                                                  ")");
    r.ext0 = r.at_2n.ext0;
    r.ext1 = r.at_2n.ext1;
    return r;
}

} // namespace qtorus

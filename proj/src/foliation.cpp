#include "qtorus/foliation.hpp"
#include "qtorus/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace qtorus {

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

std::complex<double> mode(int k, double x) { return std::polar(1.0, two_pi * k * x); }

double max_entry(const CMatrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// exact power of the Crank-Nicolson factor (1 - i a / 2) / (1 + i a / 2), a = 2 pi k slope dt
std::complex<double> cn_power(int k, double slope, int steps, long n) {
    const long double a = 2 * std::numbers::pi_v<long double> * k * slope / steps;
    const long double phase = -2 * static_cast<long double>(n) * std::atan(a / 2);
    return {static_cast<double>(std::cos(phase)), static_cast<double>(std::sin(phase))};
}

} // namespace

TrigMatrix::TrigMatrix(std::size_t rank, std::map<int, CMatrix> coefficients)
    : rank_(rank), coefficients_(std::move(coefficients)) {
    for (const auto &[k, a] : coefficients_)
        if (static_cast<std::size_t>(a.rows()) != rank_ || static_cast<std::size_t>(a.cols()) != rank_)
            throw Error(ErrorKind::InvalidArgument, "monodromy coefficient has wrong shape");
}

TrigMatrix TrigMatrix::identity(std::size_t rank) {
    const auto r = static_cast<Eigen::Index>(rank);
    return TrigMatrix(rank, {{0, CMatrix::Identity(r, r)}});
}

TrigMatrix TrigMatrix::from_samples(const std::vector<CMatrix> &samples, int degree, double drop_below) {
    const int p = static_cast<int>(samples.size());
    if (p < 2 * degree + 1) throw Error(ErrorKind::InvalidArgument, "too few samples for the requested degree");
    const auto r = samples.front().rows();
    std::map<int, CMatrix> coefficients;
    for (int k = -degree; k <= degree; ++k) {
        CMatrix a = CMatrix::Zero(r, r);
        for (int j = 0; j < p; ++j) a += samples[j] * mode(-k, static_cast<double>(j) / p);
        a /= p;
        if (max_entry(a) >= drop_below) coefficients.emplace(k, a);
    }
    return TrigMatrix(static_cast<std::size_t>(r), std::move(coefficients));
}

int TrigMatrix::degree() const {
    int d = 0;
    for (const auto &[k, a] : coefficients_) d = std::max(d, std::abs(k));
    return d;
}

CMatrix TrigMatrix::operator()(double x) const {
    const auto r = static_cast<Eigen::Index>(rank_);
    CMatrix out = CMatrix::Zero(r, r);
    for (const auto &[k, a] : coefficients_) out += a * mode(k, x);
    return out;
}

double TrigMatrix::distance(const TrigMatrix &other) const {
    double d = 0;
    for (const auto &[k, a] : coefficients_) {
        auto it = other.coefficients_.find(k);
        d = std::max(d, it == other.coefficients_.end() ? max_entry(a) : max_entry(a - it->second));
    }
    for (const auto &[k, a] : other.coefficients_)
        if (!coefficients_.count(k)) d = std::max(d, max_entry(a));
    return d;
}

CVector Section::operator()(double x) const {
    CVector out = CVector::Zero(static_cast<Eigen::Index>(rank));
    for (const auto &[k, c] : coefficients) out += c * mode(k, x);
    return out;
}

Section Section::shifted(double shift) const {
    Section out{rank, {}};
    for (const auto &[k, c] : coefficients) out.coefficients.emplace(k, c * mode(-k, shift));
    return out;
}

InvertibilityCertificate certify_invertible(const TrigMatrix &m, int grid) {
    // det M is a trig polynomial of degree <= r deg M; sample it exactly
    const int degree = static_cast<int>(m.rank()) * m.degree();
    const int p = 2 * degree + 1;
    std::vector<std::complex<double>> det_samples(p);
    for (int j = 0; j < p; ++j) det_samples[j] = m(static_cast<double>(j) / p).determinant();
    double lipschitz = 0;
    for (int k = -degree; k <= degree; ++k) {
        std::complex<double> c = 0;
        for (int j = 0; j < p; ++j) c += det_samples[j] * mode(-k, static_cast<double>(j) / p);
        lipschitz += two_pi * std::abs(k) * std::abs(c / static_cast<double>(p));
    }
    double min_det = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid; ++j) min_det = std::min(min_det, std::abs(m(static_cast<double>(j) / grid).determinant()));
    // every x lies within 1 / (2 grid) of a grid point
    return {min_det, lipschitz, grid, min_det - lipschitz / (2.0 * grid)};
}

SmallModule::SmallModule(TrigMatrix monodromy, double phi) : monodromy_(std::move(monodromy)), phi_(phi) {
    if (monodromy_.rank() == 0) throw Error(ErrorKind::InvalidArgument, "rank must be positive");
    const auto cert = certify_invertible(monodromy_);
    if (!cert.certified())
        throw Error(ErrorKind::SingularMonodromy,
                    "monodromy not certified invertible: min |det| = " + std::to_string(cert.min_abs_det));
}

Section SmallModule::e1(const Section &s) const {
    const Section moved = s.shifted(phi_);
    Section out{s.rank, {}};
    for (const auto &[k, a] : monodromy_.coefficients())
        for (const auto &[n, c] : moved.coefficients) {
            CVector term = a * c;
            auto [it, inserted] = out.coefficients.try_emplace(k + n, term);
            if (!inserted) it->second += term;
        }
    return out;
}

Section SmallModule::e2(const Section &s) const {
    Section out{s.rank, {}};
    for (const auto &[k, c] : s.coefficients) out.coefficients.emplace(k + 1, c);
    return out;
}

int commutation_exponent() {
    // on v e_k: e1 e2 picks up exp(-2 pi i (k + 1) phi), e2 e1 picks up exp(-2 pi i k phi)
    int exponent = 0;
    for (int k = -3; k <= 3; ++k) {
        const int c = -(k + 1) - (-k);
        if (k > -3 && c != exponent) throw Error(ErrorKind::InvalidArgument, "commutation phase depends on the mode");
        exponent = c;
    }
    return exponent;
}

double cocycle_parameter(double phi) { return commutation_exponent() * phi / 2; }

Section FLocalSystem::transport(const Section &s, double t) const {
    const double scaled = t * steps;
    const long n = std::lround(scaled);
    if (std::abs(scaled - static_cast<double>(n)) > 1e-9)
        throw Error(ErrorKind::InvalidArgument, "transport time must be a multiple of the time step");
    Section out{s.rank, {}};
    for (const auto &[k, c] : s.coefficients) out.coefficients.emplace(k, c * cn_power(k, transport_slope, steps, n));
    return out;
}

CVector FLocalSystem::evaluate(const Section &s, double x, double t) const { return transport(s, t)(x); }

Section FLocalSystem::holonomy_action(const Section &s) const {
    const Section end = transport(s, 1);
    Section out{s.rank, {}};
    for (const auto &[k, a] : gluing.coefficients())
        for (const auto &[n, c] : end.coefficients) {
            CVector term = a * c;
            auto [it, inserted] = out.coefficients.try_emplace(k + n, term);
            if (!inserted) it->second += term;
        }
    return out;
}

FLocalSystem to_local_system(const SmallModule &m, int steps) {
    if (steps < 8 || steps % 8 != 0) throw Error(ErrorKind::InvalidArgument, "steps must be a positive multiple of 8");
    return {m.rank(), m.phi(), m.phi(), m.monodromy(), steps};
}

double quasi_periodicity_residual(const FLocalSystem &v, const Section &s, int grid) {
    const Section glued = v.holonomy_action(s);
    double worst = 0;
    for (int j = 0; j < 8; ++j) {
        const double t = static_cast<double>(j) / 8;
        const Section next = v.transport(glued, t), here = v.transport(s, t);
        for (int i = 0; i < grid; ++i) {
            const double x = static_cast<double>(i) / grid;
            const CVector rhs = v.gluing(x - v.phi * t) * here(x - v.phi);
            worst = std::max(worst, (next(x) - rhs).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

double flatness_residual(const FLocalSystem &v, const Section &s, int grid) {
    const double dt = 1.0 / v.steps;
    double worst = 0;
    for (int j = 1; j < 8; ++j) {
        const double t = static_cast<double>(j) / 8;
        const Section after = v.transport(s, t + dt), before = v.transport(s, t - dt);
        for (int i = 0; i < grid; ++i) {
            const double x = static_cast<double>(i) / grid;
            const CVector d = (after(x + v.phi * dt) - before(x - v.phi * dt)) / (2 * dt);
            worst = std::max(worst, d.cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

SmallModule holonomy(const FLocalSystem &v, double tolerance) {
    // probe with unit vectors on the modes -1, 0, 1
    Section probe{v.rank, {}};
    const auto r = static_cast<Eigen::Index>(v.rank);
    for (int k = -1; k <= 1; ++k) probe.coefficients.emplace(k, CVector::Ones(r) / 3.0);
    const double flat = flatness_residual(v, probe);
    if (!(flat <= tolerance))
        throw Error(ErrorKind::NotFlat, "leafwise derivative residual " + std::to_string(flat));
    // holonomy on constant sections gives the columns of M(x)
    const int degree = std::max(v.gluing.degree(), 1) + 2;
    const int p = 2 * degree + 1;
    std::vector<CMatrix> samples(p, CMatrix::Zero(r, r));
    for (Eigen::Index col = 0; col < r; ++col) {
        Section basis{v.rank, {{0, CVector::Unit(r, col)}}};
        const Section image = v.holonomy_action(basis);
        for (int j = 0; j < p; ++j) samples[j].col(col) = image(static_cast<double>(j) / p);
    }
    return SmallModule(TrigMatrix::from_samples(samples, degree), v.phi);
}

GaugeReport solve_gauge(const SmallModule &from, const SmallModule &to, int degree, double tolerance) {
    if (from.rank() != to.rank()) throw Error(ErrorKind::InvalidArgument, "ranks differ");
    const auto r = static_cast<Eigen::Index>(from.rank());
    const int span = degree + std::max(from.monodromy().degree(), to.monodromy().degree());
    const Eigen::Index unknowns = (2 * degree + 1) * r * r;
    const Eigen::Index equations = (2 * span + 1) * r * r;
    auto uidx = [&](int k, Eigen::Index i, Eigen::Index j) { return ((k + degree) * r + i) * r + j; };
    auto eidx = [&](int n, Eigen::Index i, Eigen::Index j) { return ((n + span) * r + i) * r + j; };
    CMatrix a = CMatrix::Zero(equations, unknowns);
    // (G M)_n = sum_k G_k M_{n-k};  (M' G(. - phi))_n = sum_k M'_{n-k} G_k exp(-2 pi i k phi)
    for (int k = -degree; k <= degree; ++k) {
        for (const auto &[q, m] : from.monodromy().coefficients())
            for (Eigen::Index i = 0; i < r; ++i)
                for (Eigen::Index l = 0; l < r; ++l)
                    for (Eigen::Index j = 0; j < r; ++j) a(eidx(k + q, i, j), uidx(k, i, l)) += m(l, j);
        const auto shift = mode(-k, from.phi());
        for (const auto &[q, m] : to.monodromy().coefficients())
            for (Eigen::Index i = 0; i < r; ++i)
                for (Eigen::Index l = 0; l < r; ++l)
                    for (Eigen::Index j = 0; j < r; ++j) a(eidx(k + q, i, j), uidx(k, l, j)) -= m(i, l) * shift;
    }
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
    const auto &sigma = svd.singularValues();
    const double cutoff = 1e-9 * std::max(1.0, sigma.size() ? sigma(0) : 0.0);
    std::vector<CVector> nullspace;
    for (Eigen::Index c = 0; c < unknowns; ++c)
        if (c >= sigma.size() || sigma(c) <= cutoff) nullspace.push_back(svd.matrixV().col(c));
    if (nullspace.empty()) throw Error(ErrorKind::NoGaugeFound, "the gauge equation has only the zero solution");

    auto unpack = [&](const CVector &v) {
        std::map<int, CMatrix> coefficients;
        for (int k = -degree; k <= degree; ++k) {
            CMatrix g(r, r);
            for (Eigen::Index i = 0; i < r; ++i)
                for (Eigen::Index j = 0; j < r; ++j) g(i, j) = v(uidx(k, i, j));
            if (max_entry(g) > 1e-12) coefficients.emplace(k, g);
        }
        return TrigMatrix(static_cast<std::size_t>(r), std::move(coefficients));
    };
    auto residual_of = [&](const TrigMatrix &g) {
        double worst = 0;
        for (int i = 0; i < 64; ++i) {
            const double x = i / 64.0;
            const CMatrix lhs = g(x) * from.monodromy()(x) * g(x - from.phi()).inverse();
            worst = std::max(worst, max_entry(lhs - to.monodromy()(x)));
        }
        return worst;
    };

    // candidates: projection of the identity first, then basis vectors, then random mixtures
    std::vector<CVector> candidates;
    CVector id = CVector::Zero(unknowns);
    for (Eigen::Index i = 0; i < r; ++i) id(uidx(0, i, i)) = 1;
    CVector projected = CVector::Zero(unknowns);
    for (const auto &v : nullspace) projected += v * v.dot(id);
    candidates.push_back(projected);
    for (const auto &v : nullspace) candidates.push_back(v);
    std::mt19937 rng(7);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 8; ++trial) {
        CVector v = CVector::Zero(unknowns);
        for (const auto &b : nullspace) v += b * std::complex<double>(normal(rng), normal(rng));
        candidates.push_back(v);
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto &v : candidates) {
        if (v.norm() < 1e-12) continue;
        auto g = unpack(v);
        auto cert = certify_invertible(g);
        if (!cert.certified()) continue;
        const double res = residual_of(g);
        best = std::min(best, res);
        if (res <= tolerance) return {g, res, cert};
    }
    throw Error(ErrorKind::NoGaugeFound, "no certified invertible gauge; best residual " + std::to_string(best));
}

GaugeReport round_trip(const SmallModule &m, int steps, double tolerance) {
    const SmallModule back = holonomy(to_local_system(m, steps));
    return solve_gauge(m, back, std::max(2, m.monodromy().degree()), tolerance);
}

} // namespace qtorus

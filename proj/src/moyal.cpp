#include "qtorus/moyal.hpp"
#include "qtorus/error.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace qtorus {

namespace {

constexpr Real pi = std::numbers::pi_v<Real>;

} // namespace

MoyalParams::MoyalParams(std::size_t n_, Matrix<Rational> omega_, Real hbar_)
    : n(n_), omega(std::move(omega_)), hbar(hbar_) {
    if (n == 0 || omega.rows() != 2 * n || omega.cols() != 2 * n)
        throw Error(ErrorKind::InvalidArgument, "omega must be 2n x 2n");
    if (!(omega.transpose() == -omega)) throw Error(ErrorKind::InvalidArgument, "omega must be skew");
    auto inv = omega.inverse();
    if (!inv) throw Error(ErrorKind::InvalidArgument, "omega must be nondegenerate");
    mode_form = inv->transpose();
    if (!(hbar > 0)) throw Error(ErrorKind::InvalidArgument, "hbar must be positive");
}

TorusFourierSeries TorusFourierSeries::mode(LatticeVector m, Complex c) {
    TorusFourierSeries f;
    f.add_term(m, c);
    return f;
}

void TorusFourierSeries::add_term(const LatticeVector &m, Complex c) {
    if (c == Complex(0)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex(0)) terms_.erase(it);
    }
}

Complex TorusFourierSeries::coefficient(const LatticeVector &m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Complex(0) : it->second;
}

Complex TorusFourierSeries::operator()(const std::vector<Real> &x) const {
    Complex s = 0;
    for (const auto &[m, c] : terms_) {
        Real phase = 0;
        for (std::size_t i = 0; i < m.size(); ++i) phase += static_cast<Real>(m[i]) * x[i];
        s += c * std::polar<Real>(1, 2 * pi * phase);
    }
    return s;
}

TorusFourierSeries operator+(const TorusFourierSeries &a, const TorusFourierSeries &b) {
    TorusFourierSeries out = a;
    for (const auto &[m, c] : b.terms_) out.add_term(m, c);
    return out;
}

TorusFourierSeries operator-(const TorusFourierSeries &a, const TorusFourierSeries &b) {
    TorusFourierSeries out = a;
    for (const auto &[m, c] : b.terms_) out.add_term(m, -c);
    return out;
}

TorusFourierSeries TorusFourierSeries::scaled(Complex s) const {
    TorusFourierSeries out;
    for (const auto &[m, c] : terms_) out.add_term(m, s * c);
    return out;
}

Real TorusFourierSeries::sup_norm_bound() const {
    Real s = 0;
    for (const auto &[m, c] : terms_) s += std::abs(c);
    return s;
}

Rational mode_pairing(const MoyalParams &p, const LatticeVector &m, const LatticeVector &k) {
    if (m.size() != 2 * p.n || k.size() != 2 * p.n) throw Error(ErrorKind::InvalidArgument, "mode has wrong rank");
    Rational s = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < k.size(); ++j)
            if (m[i] != 0 && k[j] != 0) s += p.mode_form(i, j) * (m[i] * k[j]);
    return s;
}

TorusFourierSeries moyal_mode_product(const TorusFourierSeries &f, const TorusFourierSeries &g,
                                      const MoyalParams &params, int kappa) {
    TorusFourierSeries out;
    for (const auto &[m, a] : f.terms())
        for (const auto &[k, b] : g.terms()) {
            const Real q = to_real(mode_pairing(params, m, k));
            out.add_term(m + k, std::polar<Real>(1, -pi * params.hbar * kappa * q) * a * b);
        }
    return out;
}

TorusFourierSeries pointwise_product(const TorusFourierSeries &f, const TorusFourierSeries &g) {
    TorusFourierSeries out;
    for (const auto &[m, a] : f.terms())
        for (const auto &[k, b] : g.terms()) out.add_term(m + k, a * b);
    return out;
}

TorusFourierSeries poisson_bracket(const TorusFourierSeries &f, const TorusFourierSeries &g,
                                   const MoyalParams &params) {
    // d_i e_m = 2 pi i m_i e_m; W^{-1} = -mode_form
    TorusFourierSeries out;
    for (const auto &[m, a] : f.terms())
        for (const auto &[k, b] : g.terms()) {
            const Real q = -to_real(mode_pairing(params, m, k)) / pi;
            out.add_term(m + k, Real(-4) * pi * pi * q * a * b);
        }
    return out;
}

SemiclassicalReport semiclassical_check(const TorusFourierSeries &f, const TorusFourierSeries &g,
                                        const MoyalParams &params, const std::vector<Real> &hbars) {
    if (hbars.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two hbar values");
    SemiclassicalReport report{hbars, {}, 0};
    for (Real h : hbars) {
        MoyalParams p = params;
        p.hbar = h;
        auto commutator = moyal_mode_product(f, g, p) - moyal_mode_product(g, f, p);
        auto scaled = commutator.scaled(Complex(0, -1) / h);
        report.errors.push_back((scaled - poisson_bracket(f, g, p)).sup_norm_bound());
    }
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    const Real count = static_cast<Real>(hbars.size());
    for (std::size_t i = 0; i < hbars.size(); ++i) {
        const Real x = std::log(hbars[i]), y = std::log(report.errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    report.order = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return report;
}

Complex GaussianSymbol::factor(std::size_t j, Real y) const {
    const Real t = y - center[j];
    return std::exp(Complex(-width[j] * t * t / 2, 2 * pi * mode[j] * y));
}

Complex GaussianSymbol::operator()(Real y1, Real y2) const { return factor(0, y1) * factor(1, y2); }

namespace {

using boost::math::quadrature::gauss_kronrod;
using CD = std::complex<double>;

struct Integrated {
    CD value;
    double error;
};

// int int exp(-2 pi i freq u v) a(u) b(v) du dv, both factors Gaussian-localized.
template <class A, class B>
Integrated oscillatory_pair(A a, std::array<double, 2> urange, B b, std::array<double, 2> vrange, double freq,
                            double tolerance) {
    double worst_inner = 0;
    auto inner = [&](double u) {
        double err = 0;
        const CD h = gauss_kronrod<double, 61>::integrate(
            [&](double v) { return std::exp(CD(0, -2 * std::numbers::pi * freq * u * v)) * b(v); }, vrange[0],
            vrange[1], 20, tolerance, &err);
        worst_inner = std::max(worst_inner, err);
        return a(u) * h;
    };
    double err = 0;
    const CD value = gauss_kronrod<double, 61>::integrate(inner, urange[0], urange[1], 20, tolerance, &err);
    return {value, err + worst_inner * (urange[1] - urange[0])};
}

} // namespace

Complex moyal_quadrature_oracle(const GaussianSymbol &f, const GaussianSymbol &g, const MoyalParams &params,
                                std::array<Real, 2> x, Real tolerance) {
    if (params.n != 1) throw Error(ErrorKind::InvalidArgument, "the quadrature oracle is two-dimensional");
    // W = w J, so omega(u, v) = w (u1 v2 - u2 v1) and the integral splits into two planar ones
    const double w = static_cast<double>(to_real(params.omega(0, 1)));
    const double hbar = static_cast<double>(params.hbar);
    auto range = [](const GaussianSymbol &s, std::size_t j, Real shift) {
        const double c = static_cast<double>(s.center[j] - shift);
        const double half = 9 / std::sqrt(static_cast<double>(s.width[j]));
        return std::array<double, 2>{c - half, c + half};
    };
    auto fac = [&](const GaussianSymbol &s, std::size_t j) {
        return [&s, j, shift = x[j]](double t) { return CD(s.factor(j, shift + t)); };
    };
    const double tol = static_cast<double>(tolerance);
    // u = y - x, v = z - x, and omega(x - y, x - z) = omega(u, v)
    auto first = oscillatory_pair(fac(f, 0), range(f, 0, x[0]), fac(g, 1), range(g, 1, x[1]), w / hbar, tol);
    auto second = oscillatory_pair(fac(f, 1), range(f, 1, x[1]), fac(g, 0), range(g, 0, x[0]), -w / hbar, tol);
    const double norm = w * w / (hbar * hbar);
    const CD value = norm * first.value * second.value;
    const double error =
        norm * (first.error * std::abs(second.value) + second.error * std::abs(first.value) + first.error * second.error);
    if (!std::isfinite(error) || error > 1e3 * tol * std::max(1.0, std::abs(value)))
        throw Error(ErrorKind::QuadratureNotConverged, "quadrature error estimate " + std::to_string(error));
    return Complex(value.real(), value.imag());
}

Complex gaussian_integral(const std::vector<std::vector<Complex>> &a, const std::vector<Complex> &j) {
    const auto k = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXcd am(k, k);
    Eigen::VectorXcd jv(k);
    for (Eigen::Index r = 0; r < k; ++r) {
        jv(r) = CD(j[r]);
        for (Eigen::Index c = 0; c < k; ++c) am(r, c) = CD(a[r][c]);
    }
    // Re A > 0 puts every eigenvalue in the right half-plane, so the principal
    // square roots multiply to the analytic continuation of sqrt(det A)
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(am, false);
    CD root = 1;
    for (Eigen::Index r = 0; r < k; ++r) root *= std::sqrt(eig.eigenvalues()(r));
    const CD quad = jv.transpose() * am.partialPivLu().solve(jv);
    const CD value = std::pow(2 * std::numbers::pi, static_cast<double>(k) / 2) / root * std::exp(0.5 * quad);
    return Complex(value.real(), value.imag());
}

Complex mode_product_prediction(const GaussianSymbol &f, const GaussianSymbol &g, const MoyalParams &params,
                                std::array<Real, 2> x, int kappa) {
    if (params.n != 1) throw Error(ErrorKind::InvalidArgument, "prediction is two-dimensional");
    // z = (xi, eta); fhat(xi) = prod_j sqrt(2 pi / s) exp(-2 pi^2 (xi - m)^2 / s - 2 pi i (xi - m) c)
    std::vector<std::vector<Complex>> a(4, std::vector<Complex>(4, 0));
    std::vector<Complex> j(4, 0);
    Complex log_const = 0;
    const Complex two_pi_i(0, 2 * pi);
    auto transform = [&](const GaussianSymbol &s, std::size_t offset) {
        for (std::size_t d = 0; d < 2; ++d) {
            const Real w = s.width[d], m = s.mode[d], c = s.center[d];
            a[offset + d][offset + d] += 4 * pi * pi / w;
            j[offset + d] += 4 * pi * pi * m / w - two_pi_i * c + two_pi_i * x[d];
            log_const += -2 * pi * pi * m * m / w + two_pi_i * m * c + std::log(std::sqrt(2 * pi / w));
        }
    };
    transform(f, 0);
    transform(g, 2);
    // exp(-pi i hbar kappa xi^T M eta) = exp(-1/2 z^T B z) with B off-diagonal
    const Complex scale(0, pi * params.hbar * kappa);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            const Real mrc = to_real(params.mode_form(r, c));
            a[r][2 + c] += scale * mrc;
            a[2 + c][r] += scale * mrc;
        }
    return std::exp(log_const) * gaussian_integral(a, j);
}

CalibrationReport calibrate_mode_scale(const MoyalParams &params) {
    GaussianSymbol f{{1, 1.5L}, {0.2L, -0.1L}, {0.3L, 0}};
    GaussianSymbol g{{0.8L, 1.2L}, {-0.1L, 0.3L}, {0, -0.2L}};
    const std::vector<std::array<Real, 2>> points{{0, 0}, {0.25L, -0.4L}};
    std::vector<std::pair<std::array<Real, 2>, std::array<Complex, 2>>> truth;
    for (const auto &x : points)
        truth.push_back({x, {moyal_quadrature_oracle(f, g, params, x), moyal_quadrature_oracle(g, f, params, x)}});
    CalibrationReport report{0, {}};
    Real best = std::numeric_limits<Real>::infinity();
    for (int kappa : {-2, -1, 1, 2}) {
        Real worst = 0;
        for (const auto &[x, q] : truth) {
            worst = std::max(worst, std::abs(mode_product_prediction(f, g, params, x, kappa) - q[0]) / std::abs(q[0]));
            worst = std::max(worst, std::abs(mode_product_prediction(g, f, params, x, kappa) - q[1]) / std::abs(q[1]));
        }
        report.mismatch[kappa] = worst;
        if (worst < best) {
            best = worst;
            report.kappa = kappa;
        }
    }
    return report;
}

} // namespace qtorus

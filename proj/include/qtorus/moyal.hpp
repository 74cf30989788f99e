#pragma once

// Moyal product on Fourier modes of T^{2n}, e_m(x) = exp(2 pi i m.x).
//
// On modes the kernel integral reduces to
//   e_m * e_k = exp(-pi i hbar kappa m^T W^{-T} k) e_{m+k}
// where kappa is the mode scale. The integral formula on R^2 is evaluated by
// adaptive quadrature and used to calibrate kappa.

#include "qtorus/matrix.hpp"
#include "qtorus/rational.hpp"

#include <array>
#include <map>

namespace qtorus {

struct MoyalParams {
    MoyalParams(std::size_t n, Matrix<Rational> omega, Real hbar);

    std::size_t n;
    Matrix<Rational> omega;
    /// W^{-T}, the form induced on mode indices.
    Matrix<Rational> mode_form;
    Real hbar;
};

/// Sparse Fourier series on T^{2n}.
class TorusFourierSeries {
public:
    using TermMap = std::map<LatticeVector, Complex>;

    TorusFourierSeries() = default;
    static TorusFourierSeries mode(LatticeVector m, Complex c = 1);

    void add_term(const LatticeVector &m, Complex c);
    Complex coefficient(const LatticeVector &m) const;
    const TermMap &terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }

    Complex operator()(const std::vector<Real> &x) const;

    friend TorusFourierSeries operator+(const TorusFourierSeries &a, const TorusFourierSeries &b);
    friend TorusFourierSeries operator-(const TorusFourierSeries &a, const TorusFourierSeries &b);
    TorusFourierSeries scaled(Complex s) const;

    Real sup_norm_bound() const;

private:
    TermMap terms_;
};

/// kappa fixed by `calibrate_mode_scale` (see tests and the acceptance run).
inline constexpr int kMoyalModeScale = -2;

/// m^T W^{-T} k, exact.
Rational mode_pairing(const MoyalParams &p, const LatticeVector &m, const LatticeVector &k);

TorusFourierSeries moyal_mode_product(const TorusFourierSeries &f, const TorusFourierSeries &g,
                                      const MoyalParams &params, int kappa = kMoyalModeScale);

/// Pointwise product, the hbar -> 0 limit.
TorusFourierSeries pointwise_product(const TorusFourierSeries &f, const TorusFourierSeries &g);

/// {f, g} = sum P^{ij} d_i f d_j g with P = W^{-1} / pi, the bracket for which
/// f * g = fg + (i hbar / 2) {f, g} + O(hbar^2) under the calibrated product.
TorusFourierSeries poisson_bracket(const TorusFourierSeries &f, const TorusFourierSeries &g,
                                   const MoyalParams &params);

struct SemiclassicalReport {
    std::vector<Real> hbars;
    /// sup-norm bound of (f*g - g*f)/(i hbar) - {f,g}.
    std::vector<Real> errors;
    /// Least-squares slope of log error against log hbar.
    Real order;
};

SemiclassicalReport semiclassical_check(const TorusFourierSeries &f, const TorusFourierSeries &g,
                                        const MoyalParams &params, const std::vector<Real> &hbars);

/// f(y) = exp(-1/2 sum_j s_j (y_j - c_j)^2 + 2 pi i m.y) on R^2.
struct GaussianSymbol {
    std::array<Real, 2> width{1, 1};
    std::array<Real, 2> center{0, 0};
    std::array<Real, 2> mode{0, 0};

    Complex operator()(Real y1, Real y2) const;
    Complex factor(std::size_t j, Real y) const;
};

/// Adaptive quadrature of the kernel integral at x, normalized by |det W| / hbar^2
/// so that the unit acts as identity. n = 1 only. Throws QuadratureNotConverged.
Complex moyal_quadrature_oracle(const GaussianSymbol &f, const GaussianSymbol &g, const MoyalParams &params,
                                std::array<Real, 2> x, Real tolerance = 1e-10);

/// (f *_kappa g)(x) through the Fourier transforms of f and g and the mode
/// product with scale kappa; a closed-form Gaussian integral over R^4.
Complex mode_product_prediction(const GaussianSymbol &f, const GaussianSymbol &g, const MoyalParams &params,
                                std::array<Real, 2> x, int kappa);

struct CalibrationReport {
    int kappa;
    /// candidate -> max relative mismatch against quadrature
    std::map<int, Real> mismatch;
};

/// Tries kappa in {-2, -1, 1, 2} on asymmetric Gaussian pairs and sample points.
CalibrationReport calibrate_mode_scale(const MoyalParams &params);

/// Closed form of the integral of exp(-1/2 z^T A z + J^T z) over R^k for complex
/// symmetric A with positive-definite real part.
Complex gaussian_integral(const std::vector<std::vector<Complex>> &a, const std::vector<Complex> &j);

} // namespace qtorus

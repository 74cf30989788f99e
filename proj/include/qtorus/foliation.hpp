#pragma once

// Small modules over the rank-2 quantum torus and local systems along the
// linear foliation dt = phi dx of T^2.
//
// Sections are C^r-valued trigonometric polynomials s(x) on the transversal
// circle. e2 acts by exp(2 pi i x) and e1 by (e1 s)(x) = M(x) s(x - phi), so
// e1 e2 = exp(-2 pi i phi) e2 e1.

#include "qtorus/rational.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>

namespace qtorus {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// r x r matrix of trigonometric polynomials, sum_k A_k exp(2 pi i k x).
class TrigMatrix {
public:
    TrigMatrix() = default;
    explicit TrigMatrix(std::size_t rank) : rank_(rank) {}
    TrigMatrix(std::size_t rank, std::map<int, CMatrix> coefficients);

    static TrigMatrix identity(std::size_t rank);
    /// Fits a trig polynomial of degree <= degree to `samples` at x = j / samples.size().
    static TrigMatrix from_samples(const std::vector<CMatrix> &samples, int degree, double drop_below = 1e-13);

    std::size_t rank() const noexcept { return rank_; }
    const std::map<int, CMatrix> &coefficients() const noexcept { return coefficients_; }
    int degree() const;
    CMatrix operator()(double x) const;
    /// Max coefficient entry difference.
    double distance(const TrigMatrix &other) const;

private:
    std::size_t rank_ = 0;
    std::map<int, CMatrix> coefficients_;
};

/// C^r-valued trigonometric polynomial.
struct Section {
    std::size_t rank = 0;
    std::map<int, CVector> coefficients;

    CVector operator()(double x) const;
    /// s(x - shift)
    Section shifted(double shift) const;
};

struct InvertibilityCertificate {
    double min_abs_det;
    /// Lipschitz constant of det M from its Fourier coefficients.
    double lipschitz;
    int grid;
    /// min_abs_det - lipschitz / (2 grid); positive means certified.
    double margin;
    bool certified() const noexcept { return margin > 0; }
};

InvertibilityCertificate certify_invertible(const TrigMatrix &m, int grid = 256);

class SmallModule {
public:
    /// Throws SingularMonodromy unless the invertibility certificate holds.
    SmallModule(TrigMatrix monodromy, double phi);

    std::size_t rank() const noexcept { return monodromy_.rank(); }
    double phi() const noexcept { return phi_; }
    const TrigMatrix &monodromy() const noexcept { return monodromy_; }

    Section e1(const Section &s) const;
    Section e2(const Section &s) const;

private:
    TrigMatrix monodromy_;
    double phi_;
};

/// Exponent c in e1 e2 = exp(2 pi i c phi) e2 e1, from the action on modes.
int commutation_exponent();

/// The nc_algebra parameter theta with phi_alg(e1, e2) = theta giving the same
/// commutation phase: exp(4 pi i theta) = exp(-2 pi i phi).
double cocycle_parameter(double phi);

/// Local system on T^2 along dt = phi dx, glued at t = 1 by `gluing`, with
/// sections transported along the direction (transport_slope, 1).
struct FLocalSystem {
    std::size_t rank;
    double phi;
    double transport_slope;
    TrigMatrix gluing;
    /// Crank-Nicolson steps per unit time.
    int steps;

    /// Flat extension of the transversal data to time t (t a multiple of 1 / steps).
    Section transport(const Section &s, double t) const;
    CVector evaluate(const Section &s, double x, double t) const;
    /// Transport over one period then glue.
    Section holonomy_action(const Section &s) const;
};

FLocalSystem to_local_system(const SmallModule &m, int steps = 4096);

/// max over an x-grid and sample times of |f(x, t+1) - M(x - phi t) f(x - phi, t)|,
/// where f is the numerically transported section.
double quasi_periodicity_residual(const FLocalSystem &v, const Section &s, int grid = 64);
/// max of the central difference of f along (phi, 1).
double flatness_residual(const FLocalSystem &v, const Section &s, int grid = 64);

/// Throws NotFlat when the flatness residual exceeds `tolerance`.
SmallModule holonomy(const FLocalSystem &v, double tolerance = 1e-6);

struct GaugeReport {
    TrigMatrix gauge;
    /// max over the grid of |G(x) M(x) G(x - phi)^{-1} - M'(x)|.
    double residual;
    InvertibilityCertificate certificate;
};

/// Solves G(x) M(x) = M'(x) G(x - phi) for a trig polynomial G of degree <= degree.
/// Throws NoGaugeFound when no certified invertible solution meets `tolerance`.
GaugeReport solve_gauge(const SmallModule &from, const SmallModule &to, int degree = 2, double tolerance = 1e-8);

/// holonomy(to_local_system(M)) compared with M up to gauge.
GaugeReport round_trip(const SmallModule &m, int steps = 4096, double tolerance = 1e-8);

} // namespace qtorus

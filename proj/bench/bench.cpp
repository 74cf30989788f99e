// Serial reference vs OpenMP kernel timings; each pair is also checked for equal output.

#include "qtorus/dedekind.hpp"
#include "qtorus/legendre.hpp"
#include "qtorus/modular.hpp"
#include "qtorus/random.hpp"
#include "qtorus/theta.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

using namespace qtorus;

namespace {

template <class F>
double best_of(int reps, F &&f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

template <class Run>
void row(const char *name, int reps, Run &&run) {
    decltype(run(Execution::serial)) a, b;
    const double s = best_of(reps, [&] { a = run(Execution::serial); });
    const double p = best_of(reps, [&] { b = run(Execution::parallel); });
    std::printf("%-28s %10.4f %10.4f %8.2fx  %s\n", name, s, p, s / p, a == b ? "same" : "DIFFERENT");
}

} // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    std::printf("threads: %d\n%-28s %10s %10s %9s\n", omp_get_max_threads(), "kernel", "serial s", "parallel s", "speedup");
    Sampler rng(1);

    const SkewForm phi = rng.skew(2);
    NumericElement x(phi), y(phi);
    for (int k = 0; k < 400; ++k) {
        x.add_term(rng.vector(2, 20), Complex(rng.uniform_real(-1, 1), rng.uniform_real(-1, 1)));
        y.add_term(rng.vector(2, 20), Complex(rng.uniform_real(-1, 1), rng.uniform_real(-1, 1)));
    }
    row("multiply 400x400 terms", 3, [&](Execution e) { return multiply(x, y, e); });

    const auto params = rng.theta_params(3);
    row("theta_series d=3 r=12", 3, [&](Execution e) { return theta_series(params, 12, e).element; });

    row("brute_force_covers g=3 d=5", 1, [](Execution e) { return brute_force_covers(3, 5, e); });

    row("disconnected_bivariate 40", 1, [](Execution e) { return disconnected_bivariate(40, 16, e).c; });

    const Grid primal({-2, -2}, {2, 2}, {161, 161}), dual({-1, -1}, {1, 1}, {81, 81});
    const auto h = ConvexGridFunction::sample(primal, [](const Eigen::VectorXd &v) { return 0.5 * v.squaredNorm(); });
    row("conjugate_maximizers 2d", 3, [&](Execution e) { return conjugate_maximizers(h, dual, e); });

    row("boundary_modularity 300", 1, [](Execution e) {
        const auto r = boundary_modularity_check(300, e);
        return std::make_pair(r.pairs_checked, r.plus_sign_failures);
    });
}

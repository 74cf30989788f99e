// One PASS/FAIL line per acceptance criterion. A criterion passes when every
// case of its suite passes within the time limit. Exit status 1 if any fails.

#include "qtorus/suites.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>

namespace {

struct Criterion {
    int number;
    const char *suite;
    const char *title;
    double limit_seconds;
};

const Criterion criteria[] = {
    {1, "qtorus", "quantum torus algebra laws, exact", 30},
    {2, "morita", "partial group action and odd form", 10},
    {3, "theta", "quantum theta law and convention oracle", 120},
    {4, "foliation", "module / local system round trip", 120},
    {5, "weyl", "Ext of transversal lines", 60},
    {6, "moyal", "semiclassical order and calibration", 120},
    {7, "modular", "quasi-modular decomposition of F_2, F_3", 300},
    {8, "dedekind", "Dedekind axioms and properties", 10},
    {9, "eisenstein", "Ramanujan identity for E2", 1},
    {10, "legendre", "Legendre involution and O(h^2)", 60},
};

} // namespace

int main(int argc, char **argv) {
    qtorus::RunConfig config;
    if (argc > 1) config.seed = std::stoull(argv[1]);
    int failed = 0;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        const auto result = qtorus::run_suite(c.suite, config);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::size_t passed = 0;
        for (const auto &cs : result.cases) passed += cs.pass;
        const bool ok = result.passed() && seconds < c.limit_seconds;
        failed += !ok;
        char head[160];
        std::snprintf(head, sizeof head, "%-4s %2d  %-42s %zu/%zu cases  %7.2f s (limit %g s)", ok ? "PASS" : "FAIL", c.number,
                      c.title, passed, result.cases.size(), seconds, c.limit_seconds);
        std::cout << head;
        for (const auto &cs : result.cases)
            if (!cs.pass) std::cout << "\n        " << cs.name << ": " << (cs.witness ? cs.witness->dump() : "no witness");
        std::cout << "\n";
    }
    return failed ? 1 : 0;
}

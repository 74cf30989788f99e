#pragma once

// Invariant suites run by `verify-all` and the acceptance check, and the JSON
// report they are written to.

#include "qtorus/serialization.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qtorus {

struct RunConfig {
    /// Significant digits for reals in output; at least 15.
    int precision = 17;
    std::uint64_t seed = 7;
    enum class Format { json, tsv } format = Format::json;
    /// Keyed "module.check", e.g. "theta.law".
    std::map<std::string, double> tolerances;

    double tolerance(const std::string &key, double fallback) const;
};

struct CaseResult {
    std::string name;
    bool pass;
    std::optional<Json> witness;
    /// Decimal string, or "0" for exact checks.
    std::optional<std::string> residual;
};

struct SuiteResult {
    std::string suite;
    std::vector<CaseResult> cases;

    bool passed() const;
};

/// In the order verify-all runs them.
const std::vector<std::string> &suite_names();

/// Default tolerance for every key a suite reads.
const std::map<std::string, double> &default_tolerances();

/// Each suite draws from its own generator seeded by (config.seed, name).
SuiteResult run_suite(const std::string &name, const RunConfig &config);

/// {suite, cases: [{name, status, witness?, residual?}], versions, config}.
/// Several suites are merged under `suite` with case names "suite.case".
Json emit_report(const std::string &suite, const std::vector<SuiteResult> &results, const RunConfig &config);

Json versions();

} // namespace qtorus

#pragma once

// Command-line front end: `qtorus <module> <command> [flags]` and `qtorus verify-all`.

#include <iosfwd>
#include <string>
#include <vector>

namespace qtorus::cli {

struct CommandInfo {
    std::string module;
    /// Empty for top-level commands such as verify-all.
    std::string name;
    /// Library operations this command exposes.
    std::vector<std::string> operations;
    /// Runnable argv (without the program name).
    std::vector<std::string> example;
};

const std::vector<CommandInfo> &commands();

/// Exit codes: 0 success, 1 verification or domain failure (body carries a witness), 2 usage error.
int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace qtorus::cli

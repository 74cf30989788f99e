#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qtorus {

enum class ErrorKind {
    InvalidArgument,
    SingularGraphImage,
    ParameterMismatch,
    NotAnAutomorphism,
    DivergentParameters,
    WindowEmpty,
    QuadratureNotConverged,
    NotTransversal,
    SingularMonodromy,
    NotFlat,
    NoGaugeFound,
    NotStabilized,
    NonTransversal,
    UnsupportedWeight,
    TooLarge,
    NoSolution,
    NonConvexInput,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace qtorus

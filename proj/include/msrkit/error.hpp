#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace msrkit {

enum class ErrorKind {
    EmptyInput,
    NonFiniteValue,
    ParseError,
    WeightError,
    InvalidArgument,
    DegenerateDeviation,
    NonFiniteObjective,
    SolverFailure,
    Diverged,
    SingularCovariance,
    NoPremiumAchievable,
    InvalidP,
    InvalidGoal,
    InvalidRegime,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<long> line = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    // Line number for ParseError, 1-based.
    std::optional<long> line() const noexcept { return line_; }

    // Numerical failures, as opposed to bad input.
    bool is_solver_failure() const noexcept;

private:
    ErrorKind kind_;
    std::optional<long> line_;
};

} // namespace msrkit

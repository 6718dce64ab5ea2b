#include "msrkit/error.hpp"

namespace msrkit {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::WeightError: return "WeightError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateDeviation: return "DegenerateDeviation";
    case ErrorKind::NonFiniteObjective: return "NonFiniteObjective";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::SingularCovariance: return "SingularCovariance";
    case ErrorKind::NoPremiumAchievable: return "NoPremiumAchievable";
    case ErrorKind::InvalidP: return "InvalidP";
    case ErrorKind::InvalidGoal: return "InvalidGoal";
    case ErrorKind::InvalidRegime: return "InvalidRegime";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<long> line)
    : std::runtime_error(message), kind_(kind), line_(line) {}

bool Error::is_solver_failure() const noexcept {
    return kind_ == ErrorKind::SolverFailure || kind_ == ErrorKind::Diverged
        || kind_ == ErrorKind::NonFiniteObjective;
}

} // namespace msrkit

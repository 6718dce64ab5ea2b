#pragma once

#include "msrkit/scenario.hpp"

#include <optional>
#include <string>

namespace msrkit {

enum class MsrCase {
    Zero,     // E X <= 0
    Infinite, // X >= 0 a.s. with P(X > 0) > 0
    Interior,
};

const char* to_string(MsrCase c) noexcept;

struct MsrResult {
    double value = 0.0;
    MsrCase kind = MsrCase::Interior;
    // Maximizer (a, b) of the two-parameter representation.
    std::optional<double> a_star;
    std::optional<double> b_star;
    // Minimizer of min_c E(1 - cX)_+^p.
    std::optional<double> c_star;
};

/// Zero / Infinite / Interior from exact scenario arithmetic on X - riskfree.
MsrCase classify_msr(const ScenarioDistribution& d, double riskfree = 0.0);

/// MSR_p for p in (1, inf) via
///   MSR_p(X)^q = max_{a,b} { b - E( (q-1)/q^p |(aX+b)_+ - q|^p + (aX+b)_+ ) }.
/// Throws SolverFailure if the two-variable solve does not converge.
MsrResult msr_general(const ScenarioDistribution& d, Exponent p, double riskfree = 0.0);

/// MSR_p for p in {1, 2} via 1 / (1 + MSR_p^p) = min_{c >= 0} E(1 - cX)_+^p.
MsrResult msr_p12(const ScenarioDistribution& d, Exponent p, double riskfree = 0.0);

/// msr_p12 for p in {1, 2}, msr_general otherwise.
MsrResult msr(const ScenarioDistribution& d, Exponent p, double riskfree = 0.0);

/// Objective of the two-parameter representation, exposed for tests.
double msr_general_objective(const ScenarioDistribution& d, Exponent p, double a, double b);

/// E(1 - cX)_+^p
double msr_p12_objective(const ScenarioDistribution& d, Exponent p, double c);

} // namespace msrkit

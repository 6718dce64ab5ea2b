#pragma once

#include "msrkit/scenario.hpp"

#include <optional>
#include <utility>

namespace msrkit {

/// Lp-CVAR (superquantile) Q_p(X, level) = min_c { ||(X - c)_+||_p / (1 - level) + c }.
struct CvarResult {
    double value = 0.0;
    double level = 0.0;
    // Minimizing c. Empty when the minimum is only approached as c -> -inf
    // (level 0 with p > 1).
    std::optional<double> center;
    Exponent p{1.0};
};

enum class BpoeCase {
    AboveSup,  // x > ess sup X: 0
    AtSup,     // x == ess sup X: P(X = sup X)^(1/p)
    Main,      // E X < x < ess sup X
    BelowMean, // x <= E X: 1
};

const char* to_string(BpoeCase c) noexcept;

/// Buffered probability of exceedance P_p(X, x).
struct BpoeResult {
    double value = 1.0;
    BpoeCase kind = BpoeCase::BelowMean;
    std::optional<double> c_star;
};

/// Level must lie in [0, 1).
CvarResult cvar(const ScenarioDistribution& d, Exponent p, double level);

/// Branch classification first; the main branch solves
/// P_p(X, x) = min_{c >= 0} ||(c (X - x) + 1)_+||_p.
BpoeResult bpoe(const ScenarioDistribution& d, Exponent p, double x);

/// cvar(d, p, 1 - bpoe(d, p, x)).value, which should reproduce x.
/// Throws InvalidArgument for x above ess sup X.
double bpoe_cvar_inverse_check(const ScenarioDistribution& d, Exponent p, double x);

/// Both sides of 1 / (1 + MSR_p(X)^p) = P_p(-X, 0)^p for p in {1, 2}.
std::pair<double, double> msr_bpoe_identity_check(const ScenarioDistribution& d, Exponent p);

} // namespace msrkit

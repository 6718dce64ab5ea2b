#pragma once

#include "msrkit/scenario.hpp"

#include <vector>

namespace msrkit {

/// sigma_p(X) = min_c ||X - c||_p together with the minimizing center.
struct DeviationResult {
    double sigma = 0.0;
    double center = 0.0;
    Exponent p{2.0};
};

/// Dual element R with E R = 0, ||R||_q <= 1 and E(RX) = sigma_p(X), one entry per atom.
struct DualWitness {
    std::vector<double> r_values;
};

double lp_norm(const ScenarioDistribution& d, Exponent p);

/// ||(X - c)_+||_p
double lp_norm_positive_part(const ScenarioDistribution& d, Exponent p, double c);

/// Scalar minimization over c in [min X, max X]. For p = 1 the set of medians may
/// be an interval; its midpoint is reported.
DeviationResult lp_deviation(const ScenarioDistribution& d, Exponent p);

/// R* = sgn(X - c*) |X - c*|^(p-1) / ||X - c*||_p^(p-1), p in (1, inf).
/// The center is taken from the first-order condition E sgn(X-c)|X-c|^(p-1) = 0,
/// solved by bisection. Throws DegenerateDeviation for constant X.
DualWitness dual_witness(const ScenarioDistribution& d, Exponent p);

/// E(X - r) / sigma_p(X - r). Throws DegenerateDeviation if X - r is constant.
double lp_sharpe(const ScenarioDistribution& d, Exponent p, double riskfree);

} // namespace msrkit

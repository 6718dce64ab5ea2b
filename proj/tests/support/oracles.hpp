#pragma once

#include "msrkit/scenario.hpp"

#include <cstdint>

namespace msrkit::oracle {

// Plain ternary-search Lp-deviation, independent of the library solver.
double lp_deviation(std::span<const double> values, std::span<const double> weights, double p);

struct BruteforceMsr {
    double value = 0.0;
    // The search found ratios above the cap (the supremum is taken to be infinite).
    bool hit_cap = false;
};

// sup { E Y / sigma_p(Y) : Y <= X atom-wise } by direct search over the atoms of Y:
// truncations min(X, t), random dominated starts and coordinate refinement.
BruteforceMsr msr_bruteforce_oracle(const ScenarioDistribution& d, double p, std::uint64_t seed = 7);

// Dual form of the Lp-CVAR:
//   sup { E(R X) : R >= 0, E R = 1, ||R||_q <= 1 / (1 - level) },
// searched along rays R = 1 + s D with E D = 0 (Nelder-Mead over directions D).
double cvar_dual_check(const ScenarioDistribution& d, double p, double level, std::uint64_t seed = 11);

} // namespace msrkit::oracle

#pragma once

#include "msrkit/scenario.hpp"

#include <random>
#include <vector>

namespace msrkit::testing {

// Atoms uniform on [lo, hi], weights from a flat Dirichlet.
inline ScenarioDistribution random_law(std::mt19937_64& rng, std::size_t n, double lo = -2.0, double hi = 3.0) {
    std::uniform_real_distribution<double> value(lo, hi);
    std::exponential_distribution<double> gamma1(1.0);
    std::vector<double> v(n);
    std::vector<double> w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = value(rng);
        w[i] = gamma1(rng) + 1e-3;
        total += w[i];
    }
    for (auto& e : w) {
        e /= total;
    }
    return ScenarioDistribution(std::move(v), std::move(w));
}

// Random law with E X > 0 and an atom below zero, i.e. a finite positive MSR.
inline ScenarioDistribution random_interior_law(std::mt19937_64& rng, std::size_t n) {
    for (;;) {
        auto d = random_law(rng, n);
        if (d.expectation() > 0.05 && d.ess_inf() < -0.05) {
            return d;
        }
    }
}

} // namespace msrkit::testing

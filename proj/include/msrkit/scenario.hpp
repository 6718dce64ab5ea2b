#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace msrkit {

/// Conjugate exponent pair (p, q) with 1/p + 1/q = 1. Only p is stored.
class Exponent {
public:
    explicit Exponent(double p);

    double p() const noexcept { return p_; }
    /// +inf when p == 1.
    double q() const noexcept;

private:
    double p_;
};

/// Finite discrete law: atoms with strictly positive probabilities summing to one.
///
/// Duplicate values are kept as separate atoms; aggregation happens on demand
/// (see mass_at_sup). Immutable after construction.
class ScenarioDistribution {
public:
    /// Weights within 1e-9 of summing to one are renormalized; anything further off
    /// raises WeightError.
    ScenarioDistribution(std::vector<double> values, std::vector<double> weights);

    static ScenarioDistribution from_samples(std::span<const double> observations);
    static ScenarioDistribution point_mass(double value);

    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return values_.size(); }

    double expectation() const noexcept;
    double ess_sup() const noexcept;
    double ess_inf() const noexcept;
    /// Total weight carried by atoms equal to ess_sup().
    double mass_at_sup() const noexcept;
    /// P(X > x).
    double exceedance(double x) const noexcept;
    bool is_constant() const noexcept;

    /// Atom-wise a*X + b with the same weights.
    ScenarioDistribution affine(double a, double b) const;
    ScenarioDistribution shifted(double b) const { return affine(1.0, b); }
    ScenarioDistribution negated() const { return affine(-1.0, 0.0); }

private:
    std::vector<double> values_;
    std::vector<double> weights_;
};

/// Equal-weight empirical sample.
struct SampleSet {
    std::vector<double> observations;

    ScenarioDistribution to_distribution() const;
};

ScenarioDistribution from_samples(std::span<const double> observations);
double expectation(const ScenarioDistribution& d) noexcept;
double ess_sup(const ScenarioDistribution& d) noexcept;
double mass_at_sup(const ScenarioDistribution& d) noexcept;

/// One real per line; an optional non-numeric first line (e.g. "value") is skipped.
SampleSet parse_csv(const std::string& text);
SampleSet load_csv(const std::filesystem::path& path);

/// {"values": [...], "probs": [...]}
ScenarioDistribution parse_scenario_json(const std::string& text);
ScenarioDistribution load_scenario_json(const std::filesystem::path& path);
std::string to_scenario_json(const ScenarioDistribution& d);

/// Dispatches on extension: .json -> scenario JSON, anything else -> CSV samples.
ScenarioDistribution load_distribution(const std::filesystem::path& path);

} // namespace msrkit

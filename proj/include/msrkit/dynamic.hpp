#pragma once

#include "msrkit/risk.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace msrkit {

/// dS/S = mu dt + sigma dW, S(0) = s0.
struct GbmParams {
    double mu = 0.0;
    double sigma = 1.0;
    double s0 = 1.0;

    // Throws InvalidArgument unless sigma > 0, s0 > 0 and mu is finite.
    void validate() const;
};

/// Generator for path `path` of a run seeded with `seed`; independent of scheduling.
std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path);

/// Runs body(path) for every path in [0, n_paths) on `threads` workers (0 = hardware).
/// Each path index is visited exactly once; bodies must only write per-path slots.
void parallel_paths(std::size_t n_paths, unsigned threads, const std::function<void(std::size_t)>& body);

struct PathArray {
    std::size_t n_paths = 0;
    std::size_t n_steps = 0;
    double horizon = 0.0;
    // Path-major, n_steps + 1 values per path starting at s0.
    std::vector<double> values;

    double at(std::size_t path, std::size_t step) const { return values[path * (n_steps + 1) + step]; }
    double terminal(std::size_t path) const { return at(path, n_steps); }
};

/// Exact log-normal stepping S_{t+h} = S_t exp(sigma sqrt(h) Z + (mu - sigma^2/2) h).
PathArray gbm_paths(const GbmParams& g, double horizon, std::size_t n_steps, std::size_t n_paths,
                    std::uint64_t seed, unsigned threads = 1);

// Problem 1: minimize P_p(-X_T, 0) over trading strategies, x_0 = 0.

struct ControlSpec {
    double c = 1.0;
    double p = 2.0;
    double horizon = 1.0;

    void validate() const;
};

/// Under u_t = mu / (sigma^2 (p-1)) (c - X_t) the gap Y = c - X is a GBM:
/// dY/Y = -mu^2/(sigma^2 (p-1)) dt - mu/(sigma (p-1)) dW.
struct Problem1Law {
    ControlSpec spec;
    GbmParams market;
    double y_start = 1.0;
    double y_drift = 0.0;
    // Signed coefficient of dW; zero when mu = 0.
    double y_volatility = 0.0;

    double control(double x) const;
    /// X_T = c - Y_T from a standard normal draw of W_T / sqrt(T).
    double terminal_wealth(double z) const;
    double mean_y() const;
    double variance_y() const;
};

Problem1Law problem1_optimal_control(const ControlSpec& spec, const GbmParams& g);

/// X_T = u (mu T + sigma W_T) for a constant dollar position u.
double constant_position_wealth(const GbmParams& g, double horizon, double u, double z);

struct McEstimate {
    double value = 0.0;
    double stderr = 0.0;
};

struct Problem1Report {
    McEstimate optimal;
    // Constant position u = c mu / sigma^2, driven by the same W_T.
    McEstimate constant;
    // Standard error of optimal - constant from paired influence values.
    double difference_stderr = 0.0;
    std::vector<double> optimal_wealth;
    std::vector<double> constant_wealth;
};

/// P_p(-X_T, 0) of the closed-form optimal strategy, with a delta-method standard error.
McEstimate problem1_value(const ControlSpec& spec, const GbmParams& g, std::size_t n_paths, std::uint64_t seed,
                          unsigned threads = 1);

Problem1Report problem1_compare(const ControlSpec& spec, const GbmParams& g, std::size_t n_paths,
                                std::uint64_t seed, unsigned threads = 1);

/// Euler scheme for dX = u_t (mu dt + sigma dW) under the optimal feedback control.
/// Returns X_T per path.
std::vector<double> simulate_controlled_wealth(const ControlSpec& spec, const GbmParams& g, std::size_t n_steps,
                                               std::size_t n_paths, std::uint64_t seed, unsigned threads = 1);

/// Buffered probability of the samples, P_p(samples, threshold), with its standard error.
McEstimate bpoe_estimate(const std::vector<double>& samples, double p, double threshold);

// Problem 2: choose a stopping time to minimize P_p(x - S_tau, 0), S_inf := 0.

enum class StoppingCase {
    AnyTimeOptimal,  // mu <= 0
    AnyLevelOptimal, // mu >= sigma^2 / 2
    Threshold,
};

const char* to_string(StoppingCase c) noexcept;

struct StoppingSolution {
    StoppingCase kind = StoppingCase::Threshold;
    double gamma = 0.0;
    // Sell at the first time S reaches b_star; price units of the input.
    double b_star = 0.0;
    double c_star = 0.0;
    double value = 1.0;
    double goal = 1.0;
    double p = 2.0;
    double s0 = 1.0;
};

/// gamma = 2 mu / sigma^2.
double stopping_gamma(const GbmParams& g);
/// Minimizer over c of the two-point objective for threshold b > x (s0 = 1 units).
double problem2_c(double b, double x, double gamma, double p);
/// f(b) = (1 + C(b)(x - b))^p b^(gamma-1) + (1 + C(b) x)^p (1 - b^(gamma-1)); f(x) := 1.
double problem2_f(double b, double x, double gamma, double p);
/// Two-point objective with an explicit c, as a cross-check of problem2_c.
double problem2_f_with_c(double b, double c, double x, double gamma, double p);
/// g(b) = (b^gamma - x) / (b^((gamma+1)/2) (1 - b^(gamma-1))^(1/2)), the Sharpe ratio of S_tau - x.
double problem2_g(double b, double x, double gamma);

/// Throws InvalidGoal unless goal >= s0.
StoppingSolution problem2_threshold(const GbmParams& g, double goal, double p);

/// Argmax of g on (x, inf), in price units. Throws InvalidRegime unless 0 < mu < sigma^2/2.
double problem2_g_check(const GbmParams& g, double goal);

/// P(sup_{t <= T} (nu t + sigma W_t) >= level) for level > 0.
double first_passage_cdf(double level, double nu, double sigma, double horizon);

struct StoppingMcOptions {
    std::size_t n_paths = 100000;
    std::uint64_t seed = 42;
    unsigned threads = 1;
    // Step of the exact log-price grid; crossings inside a step use the Brownian bridge.
    double dt = 1.0;
    // Horizon cap chosen so that at most this fraction of the hitting mass is cut off.
    double cap_residual = 1e-3;
};

struct StoppingMcReport {
    McEstimate objective;
    McEstimate hit_frequency;
    double hit_probability = 0.0;
    double horizon_cap = 0.0;
    // Worst-case shift of the objective estimate caused by the cap.
    double cap_bias = 0.0;
};

/// Simulates selling at the first hit of b_star before the cap (else S = 0) and
/// estimates ||(1 + c_star (x - S_tau))_+||_p. Requires the Threshold case.
StoppingMcReport problem2_mc_validate(const StoppingSolution& sol, const GbmParams& g,
                                      const StoppingMcOptions& options = {});

/// Fraction of paths whose price reaches `level` by `horizon`.
McEstimate hitting_frequency(const GbmParams& g, double level, double horizon, const StoppingMcOptions& options);

/// Horizon T with P(tau <= T) >= (1 - residual) P(tau < inf) for the level (s0 units).
double hitting_horizon_cap(const GbmParams& g, double level, double residual);

} // namespace msrkit

#include "msrkit/dynamic.hpp"

#include "msrkit/error.hpp"
#include "msrkit/optim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace msrkit {

namespace {

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

void require_paths(std::size_t n_paths) {
    if (n_paths == 0) {
        throw Error(ErrorKind::InvalidArgument, "need at least one path");
    }
}

void require_exponent(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw Error(ErrorKind::InvalidP, "dynamic problems need a finite p > 1");
    }
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stderr_of_mean(const std::vector<double>& v) {
    if (v.size() < 2) {
        return 0.0;
    }
    const double m = mean_of(v);
    double ss = 0.0;
    for (double e : v) {
        ss += (e - m) * (e - m);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

// Delta-method influence values of P = (mean h)^(1/p) with c held at its optimum.
struct BpoeInfluence {
    McEstimate estimate;
    std::vector<double> influence;
};

BpoeInfluence bpoe_influence(const std::vector<double>& losses, double p, double threshold) {
    if (losses.empty()) {
        throw Error(ErrorKind::EmptyInput, "no samples");
    }
    const auto r = bpoe(ScenarioDistribution::from_samples(losses), Exponent(p), threshold);
    BpoeInfluence out;
    out.estimate.value = r.value;
    out.influence.assign(losses.size(), 0.0);
    if (r.kind != BpoeCase::Main || !r.c_star) {
        return out;
    }
    std::vector<double> h(losses.size());
    for (std::size_t i = 0; i < losses.size(); ++i) {
        h[i] = std::pow(std::max(0.0, *r.c_star * (losses[i] - threshold) + 1.0), p);
    }
    const double hbar = mean_of(h);
    const double slope = std::pow(r.value, 1.0 - p) / p;
    for (std::size_t i = 0; i < h.size(); ++i) {
        out.influence[i] = slope * (h[i] - hbar);
    }
    out.estimate.stderr = slope * stderr_of_mean(h);
    return out;
}

// Scans b = x + d on a geometric grid of d, doubling the right end until the
// minimum is interior, then polishes inside the neighbouring grid cell.
double minimize_on_half_line(const std::function<double(double)>& f, double x) {
    constexpr int kPerDecade = 40;
    const double unit = std::max(1.0, x);
    double hi = std::max(2.0 * x, x + 1.0) - x;
    const double d0 = 1e-8 * unit;
    for (int expansion = 0; expansion < 200; ++expansion, hi *= 2.0) {
        const int n = static_cast<int>(std::ceil(kPerDecade * std::log10(hi / d0))) + 1;
        std::vector<double> b(static_cast<std::size_t>(n));
        std::vector<double> fb(b.size());
        for (int k = 0; k < n; ++k) {
            b[static_cast<std::size_t>(k)] = x + d0 * std::pow(hi / d0, static_cast<double>(k) / (n - 1));
            fb[static_cast<std::size_t>(k)] = f(b[static_cast<std::size_t>(k)]);
            if (!std::isfinite(fb[static_cast<std::size_t>(k)])) {
                throw Error(ErrorKind::NonFiniteObjective, "non-finite objective on the threshold grid");
            }
        }
        const auto best = static_cast<std::size_t>(std::min_element(fb.begin(), fb.end()) - fb.begin());
        // Still decreasing over the last decade: push the right end out.
        const std::size_t decade = std::min<std::size_t>(kPerDecade, b.size() - 1);
        if (best + decade >= b.size() - 1 && fb.back() <= fb[b.size() - 1 - decade]) {
            continue;
        }
        if (best == b.size() - 1) {
            continue;
        }
        optim::ScalarOptions opt;
        opt.lower = b[best == 0 ? 0 : best - 1];
        opt.upper = b[best + 1];
        opt.tol = 1e-14 * b[best];
        const auto rep = optim::minimize_scalar_convex(f, {opt.lower, opt.upper}, opt);
        return rep.value <= fb[best] ? rep.argmin : b[best];
    }
    throw Error(ErrorKind::Diverged, "threshold search did not find an interior minimum");
}

std::vector<char> simulate_first_hits(double mu, double sigma, double level, double horizon, double dt,
                                      std::size_t n_paths, std::uint64_t seed, unsigned threads,
                                      double abandon_probability) {
    const double ell = std::log(level);
    const double nu = mu - 0.5 * sigma * sigma;
    const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::ceil(horizon / dt)));
    const double h = horizon / static_cast<double>(n_steps);
    const double drift = nu * h;
    const double vol = sigma * std::sqrt(h);
    const double bridge_scale = 2.0 / (sigma * sigma * h);
    // Below this log price the chance of ever reaching the level is < abandon_probability.
    const double floor = nu < 0.0 ? ell + std::log(abandon_probability) * sigma * sigma / (-2.0 * nu)
                                  : -std::numeric_limits<double>::infinity();
    std::vector<char> hit(n_paths, 0);
    if (ell <= 0.0) {
        std::fill(hit.begin(), hit.end(), 1);
        return hit;
    }
    parallel_paths(n_paths, threads, [&](std::size_t path) {
        auto rng = path_rng(seed, path);
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> uniform;
        double y = 0.0;
        for (std::size_t k = 0; k < n_steps; ++k) {
            if (y < floor) {
                return;
            }
            const double y1 = y + drift + vol * normal(rng);
            if (y1 >= ell) {
                hit[path] = 1;
                return;
            }
            const double a = bridge_scale * (ell - y) * (ell - y1);
            if (a < 40.0 && uniform(rng) < std::exp(-a)) {
                hit[path] = 1;
                return;
            }
            y = y1;
        }
    });
    return hit;
}

constexpr double kAbandonProbability = 1e-9;

} // namespace

void GbmParams::validate() const {
    if (!std::isfinite(mu) || !(sigma > 0.0) || !std::isfinite(sigma) || !(s0 > 0.0) || !std::isfinite(s0)) {
        throw Error(ErrorKind::InvalidArgument, "GBM needs finite mu, sigma > 0 and s0 > 0");
    }
}

std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
    return std::mt19937_64(seq);
}

void parallel_paths(std::size_t n_paths, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    const std::size_t workers = std::min<std::size_t>(threads, n_paths);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_paths; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_paths + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n_paths, begin + chunk);
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) {
                    body(i);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

PathArray gbm_paths(const GbmParams& g, double horizon, std::size_t n_steps, std::size_t n_paths,
                    std::uint64_t seed, unsigned threads) {
    g.validate();
    require_paths(n_paths);
    if (n_steps == 0 || !(horizon > 0.0) || !std::isfinite(horizon)) {
        throw Error(ErrorKind::InvalidArgument, "need n_steps >= 1 and a positive horizon");
    }
    PathArray out;
    out.n_paths = n_paths;
    out.n_steps = n_steps;
    out.horizon = horizon;
    out.values.resize(n_paths * (n_steps + 1));
    const double h = horizon / static_cast<double>(n_steps);
    const double drift = (g.mu - 0.5 * g.sigma * g.sigma) * h;
    const double vol = g.sigma * std::sqrt(h);
    parallel_paths(n_paths, threads, [&](std::size_t path) {
        auto rng = path_rng(seed, path);
        std::normal_distribution<double> normal;
        double* row = out.values.data() + path * (n_steps + 1);
        double log_s = std::log(g.s0);
        row[0] = g.s0;
        for (std::size_t k = 1; k <= n_steps; ++k) {
            log_s += drift + vol * normal(rng);
            row[k] = std::exp(log_s);
        }
    });
    return out;
}

void ControlSpec::validate() const {
    require_exponent(p);
    if (!(c > 0.0) || !std::isfinite(c) || !(horizon > 0.0) || !std::isfinite(horizon)) {
        throw Error(ErrorKind::InvalidArgument, "control needs a target c > 0 and a horizon T > 0");
    }
}

double Problem1Law::control(double x) const {
    return market.mu / (market.sigma * market.sigma * (spec.p - 1.0)) * (spec.c - x);
}

double Problem1Law::terminal_wealth(double z) const {
    const double t = spec.horizon;
    const double y = y_start * std::exp(y_volatility * std::sqrt(t) * z + (y_drift - 0.5 * y_volatility * y_volatility) * t);
    return spec.c - y;
}

double Problem1Law::mean_y() const {
    return y_start * std::exp(y_drift * spec.horizon);
}

double Problem1Law::variance_y() const {
    const double m = mean_y();
    return m * m * std::expm1(y_volatility * y_volatility * spec.horizon);
}

Problem1Law problem1_optimal_control(const ControlSpec& spec, const GbmParams& g) {
    spec.validate();
    g.validate();
    Problem1Law law;
    law.spec = spec;
    law.market = g;
    law.y_start = spec.c;
    law.y_drift = -g.mu * g.mu / (g.sigma * g.sigma * (spec.p - 1.0));
    law.y_volatility = -g.mu / (g.sigma * (spec.p - 1.0));
    return law;
}

double constant_position_wealth(const GbmParams& g, double horizon, double u, double z) {
    return u * (g.mu * horizon + g.sigma * std::sqrt(horizon) * z);
}

McEstimate bpoe_estimate(const std::vector<double>& samples, double p, double threshold) {
    return bpoe_influence(samples, p, threshold).estimate;
}

Problem1Report problem1_compare(const ControlSpec& spec, const GbmParams& g, std::size_t n_paths,
                                std::uint64_t seed, unsigned threads) {
    const Problem1Law law = problem1_optimal_control(spec, g);
    require_paths(n_paths);
    const double u = spec.c * g.mu / (g.sigma * g.sigma);
    Problem1Report out;
    out.optimal_wealth.resize(n_paths);
    out.constant_wealth.resize(n_paths);
    parallel_paths(n_paths, threads, [&](std::size_t path) {
        auto rng = path_rng(seed, path);
        std::normal_distribution<double> normal;
        const double z = normal(rng);
        out.optimal_wealth[path] = law.terminal_wealth(z);
        out.constant_wealth[path] = constant_position_wealth(g, spec.horizon, u, z);
    });
    std::vector<double> loss_opt(n_paths);
    std::vector<double> loss_const(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        loss_opt[i] = -out.optimal_wealth[i];
        loss_const[i] = -out.constant_wealth[i];
    }
    const auto a = bpoe_influence(loss_opt, spec.p, 0.0);
    const auto b = bpoe_influence(loss_const, spec.p, 0.0);
    out.optimal = a.estimate;
    out.constant = b.estimate;
    std::vector<double> diff(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        diff[i] = a.influence[i] - b.influence[i];
    }
    out.difference_stderr = stderr_of_mean(diff);
    return out;
}

McEstimate problem1_value(const ControlSpec& spec, const GbmParams& g, std::size_t n_paths, std::uint64_t seed,
                          unsigned threads) {
    return problem1_compare(spec, g, n_paths, seed, threads).optimal;
}

std::vector<double> simulate_controlled_wealth(const ControlSpec& spec, const GbmParams& g, std::size_t n_steps,
                                               std::size_t n_paths, std::uint64_t seed, unsigned threads) {
    const Problem1Law law = problem1_optimal_control(spec, g);
    require_paths(n_paths);
    if (n_steps == 0) {
        throw Error(ErrorKind::InvalidArgument, "need n_steps >= 1");
    }
    const double h = spec.horizon / static_cast<double>(n_steps);
    const double drift = g.mu * h;
    const double vol = g.sigma * std::sqrt(h);
    std::vector<double> out(n_paths);
    parallel_paths(n_paths, threads, [&](std::size_t path) {
        auto rng = path_rng(seed, path);
        std::normal_distribution<double> normal;
        double x = 0.0;
        for (std::size_t k = 0; k < n_steps; ++k) {
            x += law.control(x) * (drift + vol * normal(rng));
        }
        out[path] = x;
    });
    return out;
}

const char* to_string(StoppingCase c) noexcept {
    switch (c) {
    case StoppingCase::AnyTimeOptimal: return "any_time_optimal";
    case StoppingCase::AnyLevelOptimal: return "any_level_optimal";
    case StoppingCase::Threshold: return "threshold";
    }
    return "unknown";
}

double stopping_gamma(const GbmParams& g) {
    return 2.0 * g.mu / (g.sigma * g.sigma);
}

double problem2_c(double b, double x, double gamma, double p) {
    if (!(b > x)) {
        return 0.0;
    }
    // First-order condition: ((1 + c(x-b)) / (1 + cx))^(p-1) = x (b^(1-gamma) - 1) / (b - x).
    const double ratio = x * std::expm1((1.0 - gamma) * std::log(b)) / (b - x);
    const double rho = std::pow(ratio, 1.0 / (p - 1.0));
    const double c = (1.0 - rho) / ((b - x) + rho * x);
    return std::clamp(c, 0.0, 1.0 / (b - x));
}

double problem2_f_with_c(double b, double c, double x, double gamma, double p) {
    const double hit = std::pow(b, gamma - 1.0);
    return std::pow(std::max(0.0, 1.0 + c * (x - b)), p) * hit + std::pow(1.0 + c * x, p) * (1.0 - hit);
}

double problem2_f(double b, double x, double gamma, double p) {
    if (!(b > x)) {
        return 1.0;
    }
    return problem2_f_with_c(b, problem2_c(b, x, gamma, p), x, gamma, p);
}

double problem2_g(double b, double x, double gamma) {
    return (std::pow(b, gamma) - x) /
           (std::pow(b, 0.5 * (gamma + 1.0)) * std::sqrt(-std::expm1((gamma - 1.0) * std::log(b))));
}

StoppingSolution problem2_threshold(const GbmParams& g, double goal, double p) {
    g.validate();
    require_exponent(p);
    const double x = goal / g.s0;
    if (!std::isfinite(goal) || !(x >= 1.0)) {
        throw Error(ErrorKind::InvalidGoal, "goal must be at least the initial price");
    }
    StoppingSolution sol;
    sol.gamma = stopping_gamma(g);
    sol.goal = goal;
    sol.p = p;
    sol.s0 = g.s0;
    if (g.mu <= 0.0) {
        sol.kind = StoppingCase::AnyTimeOptimal;
        sol.b_star = goal;
        sol.c_star = 0.0;
        sol.value = 1.0;
        return sol;
    }
    if (sol.gamma >= 1.0) {
        sol.kind = StoppingCase::AnyLevelOptimal;
        sol.b_star = (x + 1.0) * g.s0;
        sol.c_star = 1.0 / g.s0;
        sol.value = 0.0;
        return sol;
    }
    const double gamma = sol.gamma;
    const double b = minimize_on_half_line([&](double t) { return problem2_f(t, x, gamma, p); }, x);
    const double fb = problem2_f(b, x, gamma, p);
    if (!(fb < 1.0)) {
        throw Error(ErrorKind::SolverFailure, "threshold objective did not drop below 1");
    }
    sol.kind = StoppingCase::Threshold;
    sol.b_star = b * g.s0;
    sol.c_star = problem2_c(b, x, gamma, p) / g.s0;
    sol.value = std::pow(fb, 1.0 / p);
    return sol;
}

double problem2_g_check(const GbmParams& g, double goal) {
    g.validate();
    const double gamma = stopping_gamma(g);
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw Error(ErrorKind::InvalidRegime, "the Sharpe-ratio threshold needs 0 < mu < sigma^2/2");
    }
    const double x = goal / g.s0;
    if (!std::isfinite(goal) || !(x >= 1.0)) {
        throw Error(ErrorKind::InvalidGoal, "goal must be at least the initial price");
    }
    return g.s0 * minimize_on_half_line([&](double t) { return -problem2_g(t, x, gamma); }, x);
}

double first_passage_cdf(double level, double nu, double sigma, double horizon) {
    if (level <= 0.0) {
        return 1.0;
    }
    const double s = sigma * std::sqrt(horizon);
    const double direct = normal_cdf((-level + nu * horizon) / s);
    const double tail = normal_cdf((-level - nu * horizon) / s);
    if (tail == 0.0) {
        return direct;
    }
    return direct + std::exp(2.0 * nu * level / (sigma * sigma) + std::log(tail));
}

double hitting_horizon_cap(const GbmParams& g, double level, double residual) {
    g.validate();
    const double ell = std::log(level / g.s0);
    if (ell <= 0.0) {
        return 0.0;
    }
    if (!(residual > 0.0 && residual < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "cap residual must lie in (0, 1)");
    }
    const double nu = g.mu - 0.5 * g.sigma * g.sigma;
    const double total = nu >= 0.0 ? 1.0 : std::exp(2.0 * nu * ell / (g.sigma * g.sigma));
    const double target = (1.0 - residual) * total;
    double hi = 1.0;
    for (int k = 0; first_passage_cdf(ell, nu, g.sigma, hi) < target; ++k) {
        if (k > 200) {
            throw Error(ErrorKind::Diverged, "hitting horizon cap is unbounded");
        }
        hi *= 2.0;
    }
    double lo = hi / 2.0;
    for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (lo + hi);
        (first_passage_cdf(ell, nu, g.sigma, mid) < target ? lo : hi) = mid;
    }
    return hi;
}

McEstimate hitting_frequency(const GbmParams& g, double level, double horizon, const StoppingMcOptions& options) {
    g.validate();
    require_paths(options.n_paths);
    if (!(horizon > 0.0) || !(options.dt > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "need a positive horizon and step");
    }
    const auto hit = simulate_first_hits(g.mu, g.sigma, level / g.s0, horizon, options.dt, options.n_paths,
                                         options.seed, options.threads, kAbandonProbability);
    const double n = static_cast<double>(hit.size());
    const double freq = static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / n;
    return {freq, std::sqrt(freq * (1.0 - freq) / n)};
}

StoppingMcReport problem2_mc_validate(const StoppingSolution& sol, const GbmParams& g,
                                      const StoppingMcOptions& options) {
    g.validate();
    require_paths(options.n_paths);
    if (sol.kind != StoppingCase::Threshold) {
        throw Error(ErrorKind::InvalidRegime, "Monte Carlo validation needs the threshold case");
    }
    const GbmParams unit{g.mu, g.sigma, 1.0};
    const double b = sol.b_star / g.s0;
    const double x = sol.goal / g.s0;
    const double c = sol.c_star * g.s0;
    StoppingMcReport out;
    out.horizon_cap = hitting_horizon_cap(unit, b, options.cap_residual);
    out.hit_probability = std::pow(b, sol.gamma - 1.0);

    const auto hit = simulate_first_hits(g.mu, g.sigma, b, out.horizon_cap, options.dt, options.n_paths,
                                         options.seed, options.threads, kAbandonProbability);
    const double h_hit = std::pow(std::max(0.0, 1.0 + c * (x - b)), sol.p);
    const double h_miss = std::pow(1.0 + c * x, sol.p);
    std::vector<double> h(hit.size());
    std::vector<double> indicator(hit.size());
    for (std::size_t i = 0; i < hit.size(); ++i) {
        h[i] = hit[i] ? h_hit : h_miss;
        indicator[i] = hit[i] ? 1.0 : 0.0;
    }
    const double hbar = mean_of(h);
    const double slope = std::pow(hbar, 1.0 / sol.p - 1.0) / sol.p;
    out.objective = {std::pow(hbar, 1.0 / sol.p), slope * stderr_of_mean(h)};
    out.hit_frequency = {mean_of(indicator), stderr_of_mean(indicator)};

    const double nu = g.mu - 0.5 * g.sigma * g.sigma;
    const double lost = out.hit_probability - first_passage_cdf(std::log(b), nu, g.sigma, out.horizon_cap) +
                        kAbandonProbability;
    out.cap_bias = lost * std::abs(h_miss - h_hit) * slope;
    return out;
}

} // namespace msrkit

#include "msrkit/deviation.hpp"

#include "msrkit/error.hpp"
#include "msrkit/optim.hpp"

#include <algorithm>
#include <cmath>

namespace msrkit {

namespace {

double lp_objective(const ScenarioDistribution& d, double p, double c) {
    const auto v = d.values();
    const auto w = d.weights();
    double s = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += w[i] * std::abs(v[i] - c);
        }
        return s;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += w[i] * std::pow(std::abs(v[i] - c), p);
    }
    return std::pow(s, 1.0 / p);
}

double solve_center(const ScenarioDistribution& d, double p, bool largest) {
    const double lo = d.ess_inf();
    const double hi = d.ess_sup();
    optim::ScalarOptions opt;
    opt.tol = 1e-10 * std::max(1.0, hi - lo);
    if (!largest) {
        opt.lower = lo;
        opt.upper = hi;
        return optim::minimize_scalar_convex([&](double c) { return lp_objective(d, p, c); }, {lo, hi}, opt)
            .argmin;
    }
    // Reflect so the smallest-argmin rule picks the right end of the set.
    opt.lower = -hi;
    opt.upper = -lo;
    return -optim::minimize_scalar_convex([&](double c) { return lp_objective(d, p, -c); }, {-hi, -lo}, opt)
                .argmin;
}

} // namespace

double lp_norm(const ScenarioDistribution& d, Exponent p) {
    return lp_objective(d, p.p(), 0.0);
}

double lp_norm_positive_part(const ScenarioDistribution& d, Exponent p, double c) {
    const auto v = d.values();
    const auto w = d.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double t = v[i] - c;
        if (t > 0.0) {
            s += w[i] * (p.p() == 1.0 ? t : std::pow(t, p.p()));
        }
    }
    return p.p() == 1.0 ? s : std::pow(s, 1.0 / p.p());
}

DeviationResult lp_deviation(const ScenarioDistribution& d, Exponent p) {
    if (d.is_constant()) {
        return {0.0, d.ess_sup(), p};
    }
    if (p.p() == 2.0) {
        const double m = d.expectation();
        return {lp_objective(d, 2.0, m), m, p};
    }
    double center = solve_center(d, p.p(), false);
    if (p.p() == 1.0) {
        center = 0.5 * (center + solve_center(d, 1.0, true));
    }
    return {lp_objective(d, p.p(), center), center, p};
}

DualWitness dual_witness(const ScenarioDistribution& d, Exponent p) {
    if (!(p.p() > 1.0)) {
        throw Error(ErrorKind::InvalidP, "dual witness requires p > 1");
    }
    if (d.is_constant()) {
        throw Error(ErrorKind::DegenerateDeviation, "deviation of a constant is zero; no dual witness");
    }
    const auto v = d.values();
    const auto w = d.weights();
    const double pp = p.p();
    // Derivative of E|X - c|^p / p up to sign; strictly decreasing in c.
    auto slope = [&](double c) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double t = v[i] - c;
            s += w[i] * std::copysign(std::pow(std::abs(t), pp - 1.0), t);
        }
        return s;
    };
    double lo = d.ess_inf(), hi = d.ess_sup();
    for (int k = 0; k < 200 && hi > lo; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        if (slope(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double c = std::abs(slope(lo)) <= std::abs(slope(hi)) ? lo : hi;
    const double norm = lp_objective(d, pp, c);
    const double scale = std::pow(norm, pp - 1.0);
    DualWitness out;
    out.r_values.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double t = v[i] - c;
        out.r_values[i] = std::copysign(std::pow(std::abs(t), pp - 1.0), t) / scale;
    }
    return out;
}

double lp_sharpe(const ScenarioDistribution& d, Exponent p, double riskfree) {
    const auto excess = d.shifted(-riskfree);
    if (excess.is_constant()) {
        throw Error(ErrorKind::DegenerateDeviation, "Sharpe ratio undefined for a constant return");
    }
    return excess.expectation() / lp_deviation(excess, p).sigma;
}

} // namespace msrkit

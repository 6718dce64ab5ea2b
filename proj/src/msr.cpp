#include "msrkit/msr.hpp"

#include "msrkit/deviation.hpp"
#include "msrkit/error.hpp"
#include "msrkit/optim.hpp"

#include <cmath>
#include <limits>

namespace msrkit {

const char* to_string(MsrCase c) noexcept {
    switch (c) {
    case MsrCase::Zero: return "zero";
    case MsrCase::Infinite: return "infinite";
    case MsrCase::Interior: return "interior";
    }
    return "unknown";
}

MsrCase classify_msr(const ScenarioDistribution& d, double riskfree) {
    const auto x = d.shifted(-riskfree);
    if (!(x.expectation() > 0.0)) {
        return MsrCase::Zero;
    }
    if (x.ess_inf() >= 0.0) {
        return MsrCase::Infinite;
    }
    return MsrCase::Interior;
}

namespace {

MsrResult degenerate(MsrCase kind) {
    MsrResult r;
    r.kind = kind;
    r.value = kind == MsrCase::Infinite ? std::numeric_limits<double>::infinity() : 0.0;
    return r;
}

} // namespace

double msr_general_objective(const ScenarioDistribution& d, Exponent p, double a, double b) {
    const double pp = p.p();
    const double q = p.q();
    const double k = (q - 1.0) / std::pow(q, pp);
    const auto v = d.values();
    const auto w = d.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double y = std::max(a * v[i] + b, 0.0);
        s += w[i] * (k * std::pow(std::abs(y - q), pp) + y);
    }
    return b - s;
}

double msr_p12_objective(const ScenarioDistribution& d, Exponent p, double c) {
    const auto v = d.values();
    const auto w = d.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double y = 1.0 - c * v[i];
        if (y > 0.0) {
            s += w[i] * (p.p() == 2.0 ? y * y : (p.p() == 1.0 ? y : std::pow(y, p.p())));
        }
    }
    return s;
}

MsrResult msr_general(const ScenarioDistribution& d, Exponent p, double riskfree) {
    if (!(p.p() > 1.0)) {
        throw Error(ErrorKind::InvalidP, "two-parameter representation requires p > 1");
    }
    const auto kind = classify_msr(d, riskfree);
    if (kind != MsrCase::Interior) {
        return degenerate(kind);
    }
    const auto x = d.shifted(-riskfree);
    // Solve in alpha = a * sigma so both variables are O(1).
    const double sigma = lp_deviation(x, p).sigma;
    auto objective = [&](double alpha, double b) { return msr_general_objective(x, p, alpha / sigma, b); };
    optim::Options2d opt;
    opt.scale = {1.0, 1.0};
    const auto rep = optim::maximize_2d_concave(objective, {1.0, 1.0}, opt);
    if (!rep.converged) {
        throw Error(ErrorKind::SolverFailure,
                    "two-parameter MSR solve did not converge (gradient norm " + std::to_string(rep.gradient_norm)
                        + ")");
    }
    MsrResult r;
    r.kind = kind;
    r.value = std::pow(std::max(rep.value, 0.0), 1.0 / p.q());
    r.a_star = rep.argmax[0] / sigma;
    r.b_star = rep.argmax[1];
    return r;
}

MsrResult msr_p12(const ScenarioDistribution& d, Exponent p, double riskfree) {
    if (p.p() != 1.0 && p.p() != 2.0) {
        throw Error(ErrorKind::InvalidP, "one-parameter representation holds for p = 1 or p = 2 only");
    }
    const auto kind = classify_msr(d, riskfree);
    if (kind != MsrCase::Interior) {
        return degenerate(kind);
    }
    const auto x = d.shifted(-riskfree);
    const double hi = 10.0 / std::abs(x.ess_inf());
    optim::ScalarOptions opt;
    opt.lower = 0.0;
    opt.tol = 1e-12 * hi;
    const auto rep = optim::minimize_scalar_convex([&](double c) { return msr_p12_objective(x, p, c); },
                                                   {0.0, hi}, opt);
    if (!rep.bracket_found || !(rep.value > 0.0)) {
        throw Error(ErrorKind::SolverFailure, "one-parameter MSR solve found no interior minimum");
    }
    MsrResult r;
    r.kind = kind;
    r.value = std::pow(std::max(1.0 / rep.value - 1.0, 0.0), 1.0 / p.p());
    r.c_star = rep.argmin;
    return r;
}

MsrResult msr(const ScenarioDistribution& d, Exponent p, double riskfree) {
    if (p.p() == 1.0 || p.p() == 2.0) {
        return msr_p12(d, p, riskfree);
    }
    return msr_general(d, p, riskfree);
}

} // namespace msrkit

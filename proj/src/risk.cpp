#include "msrkit/risk.hpp"

#include "msrkit/deviation.hpp"
#include "msrkit/error.hpp"
#include "msrkit/msr.hpp"
#include "msrkit/optim.hpp"

#include <cmath>
#include <limits>

namespace msrkit {

const char* to_string(BpoeCase c) noexcept {
    switch (c) {
    case BpoeCase::AboveSup: return "above_sup";
    case BpoeCase::AtSup: return "at_sup";
    case BpoeCase::Main: return "main";
    case BpoeCase::BelowMean: return "below_mean";
    }
    return "unknown";
}

CvarResult cvar(const ScenarioDistribution& d, Exponent p, double level) {
    if (!(level >= 0.0 && level < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "CVAR level must lie in [0, 1)");
    }
    CvarResult r;
    r.level = level;
    r.p = p;
    if (level == 0.0 || d.is_constant()) {
        r.value = d.expectation();
        if (p.p() == 1.0 || d.is_constant()) {
            r.center = d.ess_inf();
        }
        return r;
    }
    const double lo = d.ess_inf();
    const double hi = d.ess_sup();
    const double k = 1.0 / (1.0 - level);
    auto objective = [&](double c) { return k * lp_norm_positive_part(d, p, c) + c; };
    optim::ScalarOptions opt;
    // For c >= ess sup the objective is c itself; the minimizer can sit below ess inf when p > 1.
    opt.upper = hi;
    opt.tol = 1e-11 * (hi - lo);
    const auto rep = optim::minimize_scalar_convex(objective, {lo, hi}, opt);
    if (!rep.bracket_found) {
        throw Error(ErrorKind::SolverFailure, "CVAR minimization found no bracket");
    }
    r.value = rep.value;
    r.center = rep.argmin;
    return r;
}

BpoeResult bpoe(const ScenarioDistribution& d, Exponent p, double x) {
    BpoeResult r;
    const double top = d.ess_sup();
    if (x > top) {
        r.kind = BpoeCase::AboveSup;
        r.value = 0.0;
        return r;
    }
    if (x <= d.expectation()) {
        r.kind = BpoeCase::BelowMean;
        r.value = 1.0;
        r.c_star = 0.0;
        return r;
    }
    if (x == top) {
        r.kind = BpoeCase::AtSup;
        r.value = std::pow(d.mass_at_sup(), 1.0 / p.p());
        return r;
    }
    r.kind = BpoeCase::Main;
    const auto v = d.values();
    const auto w = d.weights();
    const double pp = p.p();
    // p-th power of the norm; same minimizer, cheaper and smoother.
    auto objective = [&](double c) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double y = c * (v[i] - x) + 1.0;
            if (y > 0.0) {
                s += w[i] * (pp == 1.0 ? y : (pp == 2.0 ? y * y : std::pow(y, pp)));
            }
        }
        return s;
    };
    optim::ScalarOptions opt;
    opt.lower = 0.0;
    opt.growth = 4.0;
    opt.max_expansions = 40;
    const double hint = 1.0 / (x - d.ess_inf());
    opt.tol = 1e-12 * hint;
    const auto rep = optim::minimize_scalar_convex(objective, {0.0, hint}, opt);
    if (!rep.bracket_found) {
        throw Error(ErrorKind::SolverFailure, "BPOE minimization found no bracket");
    }
    r.value = std::pow(rep.value, 1.0 / pp);
    r.c_star = rep.argmin;
    return r;
}

double bpoe_cvar_inverse_check(const ScenarioDistribution& d, Exponent p, double x) {
    const auto b = bpoe(d, p, x);
    if (b.kind == BpoeCase::AboveSup) {
        throw Error(ErrorKind::InvalidArgument, "threshold above ess sup: CVAR never reaches it");
    }
    const double level = std::max(0.0, 1.0 - b.value);
    return cvar(d, p, level).value;
}

std::pair<double, double> msr_bpoe_identity_check(const ScenarioDistribution& d, Exponent p) {
    const auto m = msr_p12(d, p, 0.0);
    const double lhs = std::isinf(m.value) ? 0.0 : 1.0 / (1.0 + std::pow(m.value, p.p()));
    const double rhs = std::pow(bpoe(d.negated(), p, 0.0).value, p.p());
    return {lhs, rhs};
}

} // namespace msrkit

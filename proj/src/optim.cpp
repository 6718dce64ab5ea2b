#include "msrkit/optim.hpp"

#include "msrkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace msrkit::optim {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kGoldenStep = 0.3819660112501051;
constexpr double kDivergenceNorm = 1e8;

class Objective {
public:
    explicit Objective(const ScalarFn& f) : f_(f) {}

    double operator()(double x) {
        const double v = f_(x);
        if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
            throw Error(ErrorKind::NonFiniteObjective, "objective returned a non-finite value");
        }
        return v;
    }

private:
    const ScalarFn& f_;
};

struct Bracket {
    double a, b, c;
    double fa, fb, fc;
    bool found;
};

Bracket find_bracket(Objective& f, Interval hint, const ScalarOptions& opt) {
    auto clamp = [&](double x) { return std::clamp(x, opt.lower, opt.upper); };
    double a = clamp(std::min(hint.lo, hint.hi));
    double c = clamp(std::max(hint.lo, hint.hi));
    if (a == c) {
        const double w = 1e-3 * std::max(1.0, std::abs(a));
        a = clamp(a - w);
        c = clamp(c + w);
    }
    double b = 0.5 * (a + c);
    double fa = f(a), fb = f(b), fc = f(c);
    if (a == c) {
        return {a, b, c, fa, fb, fc, true};
    }

    for (int k = 0;; ++k) {
        if (fb <= fa && fb <= fc) {
            return {a, b, c, fa, fb, fc, true};
        }
        const bool go_left = fa < fb && fa <= fc;
        if (go_left && a <= opt.lower) {
            return {a, b, c, fa, fb, fc, true};
        }
        if (!go_left && c >= opt.upper) {
            return {a, b, c, fa, fb, fc, true};
        }
        if (k >= opt.max_expansions) {
            return {a, b, c, fa, fb, fc, false};
        }
        const double width = c - a;
        if (go_left) {
            const double na = clamp(a - opt.growth * width);
            c = b, fc = fb;
            b = a, fb = fa;
            a = na, fa = f(a);
        } else {
            const double nc = clamp(c + opt.growth * width);
            a = b, fa = fb;
            b = c, fb = fc;
            c = nc, fc = f(c);
        }
    }
}

bool better(double fu, double u, double fx, double x) {
    return fu < fx || (fu == fx && u < x);
}

} // namespace

ScalarSolveReport minimize_scalar_convex(const ScalarFn& fn, Interval hint, const ScalarOptions& options) {
    Objective f(fn);
    const Bracket br = find_bracket(f, hint, options);

    ScalarSolveReport report;
    report.bracket = {br.a, br.c};
    report.bracket_found = br.found;

    if (!br.found) {
        // Monotone over the whole expansion range: report the far end we reached.
        const bool left = br.fa < br.fc;
        report.argmin = left ? br.a : br.c;
        report.value = left ? br.fa : br.fc;
        report.at_boundary = true;
        return report;
    }

    // Brent's method on [a, c] starting from the bracket midpoint.
    double a = br.a, b = br.c;
    double x = br.b, w = br.b, v = br.b;
    double fx = br.fb, fw = br.fb, fv = br.fb;
    if (better(br.fa, br.a, fx, x)) {
        x = w = v = br.a;
        fx = fw = fv = br.fa;
    }
    if (better(br.fc, br.c, fx, x)) {
        x = w = v = br.c;
        fx = fw = fv = br.fc;
    }
    double d = 0.0, e = 0.0;
    const double tol_abs = options.tol / 3.0;
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        const double xm = 0.5 * (a + b);
        const double tol1 = 4.0 * kEps * std::abs(x) + tol_abs;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) {
            break;
        }
        bool golden = true;
        if (std::abs(e) > tol1) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) {
                p = -p;
            }
            q = std::abs(q);
            const double etemp = e;
            e = d;
            if (!(std::abs(p) >= std::abs(0.5 * q * etemp) || p <= q * (a - x) || p >= q * (b - x))) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) {
                    d = std::copysign(tol1, xm - x);
                }
                golden = false;
            }
        }
        if (golden) {
            e = (x >= xm) ? a - x : b - x;
            d = kGoldenStep * e;
        }
        const double u = std::abs(d) >= tol1 ? x + d : x + std::copysign(tol1, d);
        const double fu = f(u);
        if (better(fu, u, fx, x)) {
            if (u >= x) {
                a = x;
            } else {
                b = x;
            }
            v = w, fv = fw;
            w = x, fw = fx;
            x = u, fx = fu;
        } else {
            if (u < x) {
                a = u;
            } else {
                b = u;
            }
            if (fu <= fw || w == x) {
                v = w, fv = fw;
                w = u, fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u, fv = fu;
            }
        }
    }

    const double lo = br.a, hi = br.c;

    // Brent cannot resolve the argmin of a smooth minimum much below sqrt(eps);
    // a wide three-point parabola can.
    for (int k = 0; k < 3 && hi > lo; ++k) {
        const double h = std::min({std::max(1e-5 * std::max(1.0, std::abs(x)), 10.0 * options.tol),
                                   0.25 * (hi - lo)});
        if (x - h < lo || x + h > hi) {
            break;
        }
        const double fp = f(x + h), fm = f(x - h);
        const double d2 = fp - 2.0 * fx + fm;
        const double noise = 8.0 * kEps * (std::abs(fx) + std::abs(fp) + std::abs(fm));
        if (!(d2 > 1e3 * noise)) {
            break;
        }
        const double step = -h * (fp - fm) / (2.0 * d2);
        if (!(std::abs(step) <= h)) {
            break;
        }
        const double u = std::clamp(x + step, lo, hi);
        const double fu = f(u);
        if (fu <= fx + 4.0 * kEps * std::abs(fx)) {
            x = u;
            fx = fu;
        } else {
            break;
        }
        if (std::abs(step) < 1e-3 * options.tol) {
            break;
        }
    }

    // Flat minimum: move to the left edge of the minimizing set.
    {
        const double wdt = std::max(1e-6 * std::max(1.0, std::abs(x)), 100.0 * options.tol);
        if (x - wdt >= lo) {
            const double noise = 8.0 * kEps * std::max(std::abs(fx), 1e-300);
            const double fl = f(x - wdt);
            if (fl <= fx + noise) {
                double inside = x - wdt;
                double outside = lo;
                if (f(lo) <= fx + noise) {
                    inside = lo;
                } else {
                    while (inside - outside > options.tol / 4.0) {
                        const double mid = 0.5 * (inside + outside);
                        if (f(mid) <= fx + noise) {
                            inside = mid;
                        } else {
                            outside = mid;
                        }
                    }
                }
                const double fi = f(inside);
                if (fi <= fx + noise) {
                    x = inside;
                    fx = fi;
                }
            }
        }
    }

    // Minimum on a domain bound.
    if (lo == options.lower) {
        const double fl = f(lo);
        if (fl <= fx) {
            x = lo, fx = fl;
        }
    }
    if (hi == options.upper) {
        const double fh = f(hi);
        if (fh < fx) {
            x = hi, fx = fh;
        }
    }

    report.argmin = x;
    report.value = fx;
    report.iterations = iter;
    report.at_boundary = (x == options.lower || x == options.upper);
    return report;
}

std::array<double, 2> fd_gradient(const Fn2d& f, std::array<double, 2> x) {
    std::array<double, 2> g{};
    for (int i = 0; i < 2; ++i) {
        const double h = std::max(1e-6, 1e-6 * std::abs(x[i]));
        auto xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp[0], xp[1]) - f(xm[0], xm[1])) / (2.0 * h);
    }
    return g;
}

Solve2dReport maximize_2d_concave(const Fn2d& f, std::array<double, 2> start, const Options2d& options) {
    const double sa = options.scale[0];
    const double sb = options.scale[1];
    auto check_norm = [](double a, double b) {
        if (!(std::hypot(a, b) <= kDivergenceNorm)) {
            throw Error(ErrorKind::Diverged, "two-variable solve diverged (iterate norm above 1e8)");
        }
    };

    ScalarOptions inner_opt;
    inner_opt.tol = 1e-10 * sb;
    ScalarOptions outer_opt;
    outer_opt.tol = 1e-10 * sa;

    Solve2dReport best;
    bool have_best = false;
    for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
            const double a0 = start[0] + 0.5 * i * sa;
            const double b0 = start[1] + 0.5 * j * sb;
            double b_hint = b0;
            int inner_iterations = 0;
            auto inner = [&](double a) {
                const auto r = minimize_scalar_convex([&](double b) { return -f(a, b); },
                                                      {b_hint - sb, b_hint + sb}, inner_opt);
                inner_iterations += r.iterations;
                if (!r.bracket_found) {
                    throw Error(ErrorKind::Diverged, "inner solve found no bracket");
                }
                check_norm(a, r.argmin);
                b_hint = r.argmin;
                return r;
            };
            const auto outer = minimize_scalar_convex([&](double a) { return inner(a).value; },
                                                      {a0 - sa, a0 + sa}, outer_opt);
            if (!outer.bracket_found) {
                throw Error(ErrorKind::Diverged, "outer solve found no bracket");
            }
            const double a_star = outer.argmin;
            const double b_star = inner(a_star).argmin;
            check_norm(a_star, b_star);
            const double value = f(a_star, b_star);
            if (!have_best || value > best.value) {
                best.argmax = {a_star, b_star};
                best.value = value;
                have_best = true;
            }
            best.iterations += outer.iterations + inner_iterations;
        }
    }
    const auto g = fd_gradient(f, best.argmax);
    best.gradient_norm = std::hypot(g[0], g[1]);
    // Near a kink of low curvature order the difference quotient is unreliable;
    // accept a point no neighbour on a small compass ring improves on.
    auto ring_is_flat = [&](double h) {
        const double slack = 1e-12 * std::max(1.0, std::abs(best.value));
        for (int i = -1; i <= 1; ++i) {
            for (int j = -1; j <= 1; ++j) {
                if ((i != 0 || j != 0) && f(best.argmax[0] + i * h * sa, best.argmax[1] + j * h * sb) > best.value + slack) {
                    return false;
                }
            }
        }
        return true;
    };
    best.converged = best.gradient_norm <= options.tol || (ring_is_flat(1e-6) && ring_is_flat(1e-4));
    return best;
}

} // namespace msrkit::optim

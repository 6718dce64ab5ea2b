#include "doctest.h"

#include "msrkit/error.hpp"
#include "msrkit/msr.hpp"
#include "msrkit/optim.hpp"

#include <cmath>
#include <random>

using namespace msrkit;
using namespace msrkit::optim;

TEST_SUITE("optim") {

TEST_CASE("scalar examples") {
    const auto q = minimize_scalar_convex([](double c) { return (c - 3) * (c - 3); }, {0, 1});
    CHECK(std::abs(q.argmin - 3.0) <= 1e-9);
    CHECK(q.bracket_found);
    CHECK(q.bracket.lo <= q.argmin);
    CHECK(q.argmin <= q.bracket.hi);

    const auto k = minimize_scalar_convex([](double c) { return std::abs(c); }, {-1, 1});
    CHECK(std::abs(k.argmin) <= 1e-9);
}

TEST_CASE("hand-derived stationary point agrees with a 10^6 grid") {
    auto f = [](double c) {
        const double t = std::max(0.0, 1 - 2 * c);
        return 0.5 * t * t + 0.5 * (1 + c) * (1 + c);
    };
    const auto r = minimize_scalar_convex(f, {0, 1});
    double best = 0.0;
    double best_f = f(0.0);
    for (int i = 1; i <= 1000000; ++i) {
        const double c = i * 1e-6;
        if (f(c) < best_f) {
            best_f = f(c);
            best = c;
        }
    }
    CHECK(std::abs(best - 0.2) <= 1e-6);
    CHECK(std::abs(r.argmin - 0.2) <= 1e-9);
    CHECK(std::abs(r.value - 0.9) <= 1e-12);
}

TEST_CASE("strictly convex quadratics are solved to tolerance") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-50, 50);
    std::uniform_real_distribution<double> curv(0.01, 100);
    for (int t = 0; t < 100; ++t) {
        const double a = curv(rng);
        const double m = u(rng);
        const double c0 = u(rng);
        const auto r = minimize_scalar_convex([&](double x) { return a * (x - m) * (x - m) + c0; }, {-1, 1});
        CHECK(std::abs(r.argmin - m) <= 1e-9 * std::max(1.0, std::abs(m)));
    }
}

TEST_CASE("domain bounds and boundary minima") {
    ScalarOptions opt;
    opt.lower = 0.0;
    const auto r = minimize_scalar_convex([](double c) { return (c + 2) * (c + 2); }, {0, 1}, opt);
    CHECK(r.argmin == 0.0);
    CHECK(r.at_boundary);
}

TEST_CASE("flat minimum returns the smallest argmin") {
    auto f = [](double c) { return c < 1 ? 1 - c : (c > 2 ? c - 2 : 0.0); };
    const auto r = minimize_scalar_convex(f, {-5, 5});
    CHECK(r.value == 0.0);
    CHECK(std::abs(r.argmin - 1.0) <= 1e-8);
}

TEST_CASE("monotone objective reports no bracket") {
    const auto r = minimize_scalar_convex([](double c) { return -c; }, {0, 1});
    CHECK_FALSE(r.bracket_found);
}

TEST_CASE("NaN objective is an error") {
    try {
        minimize_scalar_convex([](double) { return std::nan(""); }, {0, 1});
        FAIL("expected NonFiniteObjective");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonFiniteObjective);
    }
}

TEST_CASE("2-D examples") {
    const auto r = maximize_2d_concave([](double a, double b) { return -(a - 1) * (a - 1) - (b + 2) * (b + 2); }, {0, 0});
    CHECK(r.converged);
    CHECK(std::abs(r.argmax[0] - 1) <= 1e-6);
    CHECK(std::abs(r.argmax[1] + 2) <= 1e-6);

    const auto s = maximize_2d_concave([](double, double b) { return b - std::exp(b); }, {0, 0});
    CHECK(s.converged);
    CHECK(std::abs(s.argmax[1]) <= 1e-6);
}

TEST_CASE("2-D solve of the two-parameter MSR objective gives MSR^2 = 1/9") {
    const ScenarioDistribution d({-1, 2}, {0.5, 0.5});
    const Exponent p(2.0);
    const auto r = maximize_2d_concave([&](double a, double b) { return msr_general_objective(d, p, a, b); }, {1, 1});
    CHECK(r.converged);
    CHECK(std::abs(r.value - 1.0 / 9.0) <= 1e-9);
}

TEST_CASE("random negative-definite quadratics") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 100; ++t) {
        // -(x - m)^T A (x - m) with A = L L^T + 0.1 I.
        const double l11 = u(rng), l21 = u(rng), l22 = u(rng);
        const double a11 = l11 * l11 + 0.1, a12 = l11 * l21, a22 = l21 * l21 + l22 * l22 + 0.1;
        const double m0 = u(rng), m1 = u(rng);
        auto f = [&](double x, double y) {
            const double dx = x - m0, dy = y - m1;
            return -(a11 * dx * dx + 2 * a12 * dx * dy + a22 * dy * dy);
        };
        Options2d opt;
        const auto r = maximize_2d_concave(f, {0, 0}, opt);
        CHECK(r.converged);
        CHECK(std::abs(r.argmax[0] - m0) <= 10 * opt.tol * std::max(1.0, 1.0 / std::min(a11, a22)));
        CHECK(std::abs(r.argmax[1] - m1) <= 10 * opt.tol * std::max(1.0, 1.0 / std::min(a11, a22)));
    }
}

TEST_CASE("unbounded concave objective diverges") {
    try {
        maximize_2d_concave([](double a, double b) { return a + b; }, {0, 0});
        FAIL("expected Diverged");
    } catch (const Error& e) {
        CHECK(e.is_solver_failure());
    }
}

}

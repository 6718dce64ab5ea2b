#include "doctest.h"

#include "msrkit/error.hpp"
#include "msrkit/msr.hpp"
#include "msrkit/risk.hpp"

#include "oracles.hpp"
#include "random_laws.hpp"

#include <cmath>

using namespace msrkit;

namespace {

ScenarioDistribution mixture(const ScenarioDistribution& a, const ScenarioDistribution& b, double lam) {
    std::vector<double> v, w;
    for (std::size_t i = 0; i < a.size(); ++i) {
        v.push_back(a.values()[i]);
        w.push_back(lam * a.weights()[i]);
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        v.push_back(b.values()[i]);
        w.push_back((1 - lam) * b.weights()[i]);
    }
    return ScenarioDistribution(v, w);
}

} // namespace

TEST_SUITE("risk") {

TEST_CASE("cvar examples") {
    std::mt19937_64 rng(41);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        const auto d = testing::random_law(rng, 5);
        CHECK(cvar(d, Exponent(p), 0.0).value == doctest::Approx(d.expectation()).epsilon(1e-9));
    }
    const ScenarioDistribution half({0, 1}, {0.5, 0.5});
    const auto r = cvar(half, Exponent(1), 0.75);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
    REQUIRE(r.center);
    CHECK(*r.center == doctest::Approx(1.0).epsilon(1e-8));

    // Above 1 - P(X = sup)^(1/p) the CVAR saturates at the supremum.
    for (double p : {1.0, 2.0, 3.0}) {
        const double kink = 1 - std::pow(0.5, 1 / p);
        CHECK(cvar(half, Exponent(p), kink + 0.01).value == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(cvar(half, Exponent(p), kink - 0.05).value < 1.0);
    }
}

TEST_CASE("cvar rejects levels outside [0, 1)") {
    const ScenarioDistribution d({0, 1}, {0.5, 0.5});
    for (double level : {-0.1, 1.0, 1.5}) {
        try {
            cvar(d, Exponent(1), level);
            FAIL("expected InvalidArgument");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidArgument);
        }
    }
}

TEST_CASE("primal cvar matches the dual program") {
    const ScenarioDistribution half({0, 1}, {0.5, 0.5});
    CHECK(std::abs(oracle::cvar_dual_check(half, 2.0, 0.0) - 0.5) <= 1e-6);
    CHECK(std::abs(oracle::cvar_dual_check(half, 1.0, 0.75) - 1.0) <= 1e-6);

    std::mt19937_64 rng(43);
    for (int t = 0; t < 10; ++t) {
        const auto d = testing::random_law(rng, 4);
        for (double p : {1.0, 2.0, 3.0}) {
            const double level = 0.5;
            CHECK(std::abs(oracle::cvar_dual_check(d, p, level) - cvar(d, Exponent(p), level).value) <= 1e-4);
        }
    }
}

TEST_CASE("bpoe branches") {
    const ScenarioDistribution d({-2, 1}, {0.5, 0.5});
    const auto below = bpoe(d, Exponent(1), -0.5);
    CHECK(below.kind == BpoeCase::BelowMean);
    CHECK(below.value == 1.0);
    const auto above = bpoe(d, Exponent(2), 1.5);
    CHECK(above.kind == BpoeCase::AboveSup);
    CHECK(above.value == 0.0);
    const auto at = bpoe(d, Exponent(2), 1.0);
    CHECK(at.kind == BpoeCase::AtSup);
    CHECK(at.value == doctest::Approx(std::sqrt(0.5)));

    const auto main = bpoe(d, Exponent(1), 0.0);
    CHECK(main.kind == BpoeCase::Main);
    CHECK(main.value == doctest::Approx(0.75).epsilon(1e-12));
    REQUIRE(main.c_star);
    // Grid oracle over c in [0, 10].
    double best = 1e9, best_c = 0;
    for (int i = 0; i <= 100000; ++i) {
        const double c = i * 1e-4;
        const double v = 0.5 * std::max(0.0, c * -2 + 1) + 0.5 * std::max(0.0, c + 1);
        if (v < best) {
            best = v;
            best_c = c;
        }
    }
    CHECK(best == doctest::Approx(0.75));
    CHECK(best_c == doctest::Approx(0.5));
    CHECK(*main.c_star == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("bpoe inverts cvar") {
    const ScenarioDistribution d({-2, 1}, {0.5, 0.5});
    CHECK(std::abs(bpoe_cvar_inverse_check(d, Exponent(1), 0.0)) <= 1e-9);
    CHECK(bpoe_cvar_inverse_check(d, Exponent(2), -0.5) == doctest::Approx(-0.5));
    try {
        bpoe_cvar_inverse_check(d, Exponent(1), 2.0);
        FAIL("expected InvalidArgument");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidArgument);
    }
}

TEST_CASE("MSR and BPOE identity examples") {
    const auto [l2, r2] = msr_bpoe_identity_check(ScenarioDistribution({-1, 2}, {0.5, 0.5}), Exponent(2));
    CHECK(l2 == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(r2 == doctest::Approx(0.9).epsilon(1e-9));
    const auto [l1, r1] = msr_bpoe_identity_check(ScenarioDistribution({2, -1}, {0.5, 0.5}), Exponent(1));
    CHECK(l1 == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(r1 == doctest::Approx(0.75).epsilon(1e-9));
    const auto [l0, r0] = msr_bpoe_identity_check(ScenarioDistribution({-2, 1}, {0.5, 0.5}), Exponent(2));
    CHECK(l0 == 1.0);
    CHECK(r0 == 1.0);
}

TEST_CASE("monotonicity properties") {
    std::mt19937_64 rng(47);
    for (int t = 0; t < 30; ++t) {
        const auto d = testing::random_law(rng, 6);
        for (double p : {1.0, 2.0, 3.0}) {
            double prev = -1e300;
            for (int k = 0; k < 50; ++k) {
                const double v = cvar(d, Exponent(p), k / 50.0).value;
                CHECK(v >= prev - 1e-9);
                prev = v;
            }
        }
        const double lo = d.expectation();
        const double hi = d.ess_sup();
        double prev = 2.0;
        for (int k = 0; k <= 40; ++k) {
            const double x = lo - 0.5 + (hi - lo + 1.0) * k / 40.0;
            const double b1 = bpoe(d, Exponent(1), x).value;
            const double b2 = bpoe(d, Exponent(2), x).value;
            const double b3 = bpoe(d, Exponent(3), x).value;
            CHECK(b1 <= prev + 1e-12);
            prev = b1;
            CHECK(b1 <= b2 + 1e-9);
            CHECK(b2 <= b3 + 1e-9);
            CHECK(b1 >= d.exceedance(x) - 1e-12);
        }
    }
}

TEST_CASE("bpoe is concave under mixtures") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 50; ++t) {
        const auto a = testing::random_law(rng, 4);
        const auto b = testing::random_law(rng, 4);
        const double lam = u(rng);
        const double x = -1 + 3 * u(rng);
        for (double p : {1.0, 2.0}) {
            const double mixed = bpoe(mixture(a, b, lam), Exponent(p), x).value;
            CHECK(mixed >= lam * bpoe(a, Exponent(p), x).value + (1 - lam) * bpoe(b, Exponent(p), x).value - 1e-9);
        }
    }
}

}

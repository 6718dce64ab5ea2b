#include "doctest.h"

#include "msrkit/error.hpp"
#include "msrkit/scenario.hpp"

#include "random_laws.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>

using namespace msrkit;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected msrkit::Error");
    return ErrorKind::Io;
}

} // namespace

TEST_SUITE("scenario") {

TEST_CASE("from_samples keeps order and multiplicity") {
    const std::vector<double> obs{1, 1, 4};
    const auto d = from_samples(obs);
    REQUIRE(d.size() == 3);
    CHECK(d.values()[0] == 1.0);
    CHECK(d.values()[2] == 4.0);
    for (double w : d.weights()) {
        CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    }
    const auto single = from_samples(std::vector<double>{5});
    CHECK(single.weights()[0] == 1.0);
    CHECK(single.is_constant());
}

TEST_CASE("expectation, ess_sup and mass_at_sup") {
    const ScenarioDistribution two({-1, 2}, {0.5, 0.5});
    CHECK(expectation(two) == 0.5);
    CHECK(ess_sup(two) == 2.0);
    CHECK(mass_at_sup(two) == 0.5);
    CHECK(expectation(ScenarioDistribution::point_mass(5)) == 5.0);
    CHECK(mass_at_sup(ScenarioDistribution::point_mass(5)) == 1.0);
    CHECK(expectation(ScenarioDistribution({0, 1, 2}, {0.25, 0.5, 0.25})) == 1.0);
    const ScenarioDistribution dup({2, 2, 0}, {0.3, 0.2, 0.5});
    CHECK(ess_sup(dup) == 2.0);
    CHECK(mass_at_sup(dup) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(two.exceedance(0.0) == 0.5);
    CHECK(two.exceedance(2.0) == 0.0);
}

TEST_CASE("validation errors") {
    CHECK(kind_of([] { from_samples(std::vector<double>{}); }) == ErrorKind::EmptyInput);
    CHECK(kind_of([] { ScenarioDistribution({1.0, std::nan("")}, {0.5, 0.5}); }) == ErrorKind::NonFiniteValue);
    CHECK(kind_of([] { ScenarioDistribution({1.0, 2.0}, {0.5, 0.6}); }) == ErrorKind::WeightError);
    CHECK(kind_of([] { ScenarioDistribution({1.0, 2.0}, {1.5, -0.5}); }) == ErrorKind::WeightError);
    CHECK(kind_of([] { ScenarioDistribution({1.0, 2.0}, {0.5}); }) == ErrorKind::WeightError);
    CHECK(kind_of([] { Exponent(0.5); }) == ErrorKind::InvalidP);
    CHECK(kind_of([] { Exponent(std::numeric_limits<double>::infinity()); }) == ErrorKind::InvalidP);
}

TEST_CASE("near-unit weights are renormalized") {
    const ScenarioDistribution d({1.0, 2.0}, {0.5, 0.5 + 5e-10});
    CHECK(d.weights()[0] + d.weights()[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("exponent conjugate") {
    CHECK(std::isinf(Exponent(1.0).q()));
    CHECK(Exponent(2.0).q() == 2.0);
    CHECK(Exponent(3.0).q() == doctest::Approx(1.5));
}

TEST_CASE("CSV parsing") {
    const auto s = parse_csv("1\n-0.5\n");
    REQUIRE(s.observations.size() == 2);
    CHECK(s.observations[1] == -0.5);
    CHECK(parse_csv("value\n3\n\n4\n").observations.size() == 2);
    try {
        parse_csv("value\n1\nabc\n");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ParseError);
        REQUIRE(e.line());
        CHECK(*e.line() == 3);
    }
    CHECK(kind_of([] { parse_csv("value\n"); }) == ErrorKind::EmptyInput);
    CHECK(kind_of([] { parse_csv("1\ninf\n"); }) == ErrorKind::NonFiniteValue);
}

TEST_CASE("scenario JSON") {
    const auto d = parse_scenario_json(R"({"values":[-1,2],"probs":[0.5,0.5]})");
    CHECK(d.expectation() == 0.5);
    CHECK(kind_of([] { parse_scenario_json(R"({"values":[-1,2],"probs":[0.5,0.6]})"); }) == ErrorKind::WeightError);
    CHECK(kind_of([] { parse_scenario_json(R"({"values":[-1,2]})"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_scenario_json("{not json"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_scenario_json(R"({"values":["a"],"probs":[1]})"); }) == ErrorKind::ParseError);
}

TEST_CASE("round trip through JSON equals the normalized law") {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 50; ++t) {
        const auto d = testing::random_law(rng, 1 + t % 7);
        const auto back = parse_scenario_json(to_scenario_json(d));
        REQUIRE(back.size() == d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            CHECK(back.values()[i] == d.values()[i]);
            CHECK(back.weights()[i] == doctest::Approx(d.weights()[i]).epsilon(1e-14));
        }
    }
}

TEST_CASE("load_distribution dispatches on extension") {
    const auto dir = std::filesystem::temp_directory_path();
    {
        std::ofstream(dir / "msrkit_t.csv") << "value\n1\n3\n";
        std::ofstream(dir / "msrkit_t.json") << R"({"values":[1,3],"probs":[0.25,0.75]})";
    }
    CHECK(load_distribution(dir / "msrkit_t.csv").expectation() == 2.0);
    CHECK(load_distribution(dir / "msrkit_t.json").expectation() == 2.5);
    CHECK(kind_of([&] { load_distribution(dir / "msrkit_missing.csv"); }) == ErrorKind::Io);
}

TEST_CASE("expectation is affine and matches the sample mean") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 100; ++t) {
        const auto d = testing::random_law(rng, 5);
        const double a = u(rng);
        const double b = u(rng);
        CHECK(d.affine(a, b).expectation() == doctest::Approx(a * d.expectation() + b).epsilon(1e-12));
        std::vector<double> obs(10);
        double sum = 0.0;
        for (auto& o : obs) {
            o = u(rng);
            sum += o;
        }
        CHECK(std::abs(from_samples(obs).expectation() - sum / 10.0) <= 1e-12);
    }
}

}

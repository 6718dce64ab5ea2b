#include "msrkit/deviation.hpp"
#include "msrkit/dynamic.hpp"
#include "msrkit/error.hpp"
#include "msrkit/msr.hpp"
#include "msrkit/portfolio.hpp"
#include "msrkit/risk.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace msrkit;

namespace {

ScenarioDistribution law(std::vector<double> values, std::optional<std::vector<double>> probs) {
    if (!probs) {
        return ScenarioDistribution::from_samples(values);
    }
    return ScenarioDistribution(std::move(values), std::move(*probs));
}

py::dict msr_dict(const MsrResult& r) {
    py::dict d;
    d["msr"] = r.value;
    d["case"] = to_string(r.kind);
    d["c_star"] = r.c_star ? py::cast(*r.c_star) : py::none();
    d["a_star"] = r.a_star ? py::cast(*r.a_star) : py::none();
    d["b_star"] = r.b_star ? py::cast(*r.b_star) : py::none();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Monotone Sharpe ratio, Lp-CVAR and buffered probability of exceedance";

    static py::exception<Error> base(m, "MsrkitError", PyExc_ValueError);
    static py::exception<Error> solver(m, "SolverError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
            py::set_error(e.is_solver_failure() ? solver : base, msg.c_str());
        }
    });

    m.def(
        "lp_deviation",
        [](std::vector<double> values, std::optional<std::vector<double>> probs, double p) {
            const auto r = lp_deviation(law(std::move(values), std::move(probs)), Exponent(p));
            return py::make_tuple(r.sigma, r.center);
        },
        py::arg("values"), py::arg("probs") = py::none(), py::arg("p") = 2.0,
        "(sigma_p, center) of the scenario law");

    m.def(
        "lp_sharpe",
        [](std::vector<double> values, std::optional<std::vector<double>> probs, double p, double riskfree) {
            return lp_sharpe(law(std::move(values), std::move(probs)), Exponent(p), riskfree);
        },
        py::arg("values"), py::arg("probs") = py::none(), py::arg("p") = 2.0, py::arg("riskfree") = 0.0);

    m.def(
        "msr",
        [](std::vector<double> values, std::optional<std::vector<double>> probs, double p, double riskfree) {
            return msr_dict(msr(law(std::move(values), std::move(probs)), Exponent(p), riskfree));
        },
        py::arg("values"), py::arg("probs") = py::none(), py::arg("p") = 2.0, py::arg("riskfree") = 0.0);

    m.def(
        "cvar",
        [](std::vector<double> values, std::optional<std::vector<double>> probs, double p, double level) {
            return cvar(law(std::move(values), std::move(probs)), Exponent(p), level).value;
        },
        py::arg("values"), py::arg("probs") = py::none(), py::arg("p") = 1.0, py::arg("level") = 0.0);

    m.def(
        "bpoe",
        [](std::vector<double> values, std::optional<std::vector<double>> probs, double p, double x) {
            const auto r = bpoe(law(std::move(values), std::move(probs)), Exponent(p), x);
            return py::make_tuple(r.value, to_string(r.kind));
        },
        py::arg("values"), py::arg("probs") = py::none(), py::arg("p") = 1.0, py::arg("x") = 0.0);

    m.def(
        "solve_bpoe_portfolio",
        [](const Eigen::MatrixXd& returns, std::optional<std::vector<double>> probs, double riskfree, double p,
           double delta) {
            const auto n = static_cast<std::size_t>(returns.rows());
            const MarketScenarios market(returns, probs.value_or(std::vector<double>(n, 1.0 / static_cast<double>(n))),
                                         riskfree);
            const auto s = solve_bpoe_portfolio(market, Exponent(p), delta);
            py::dict d;
            d["case"] = to_string(s.kind);
            d["risky_direction"] = s.risky_direction;
            d["weights"] = s.full_weights;
            d["objective"] = s.objective;
            return d;
        },
        py::arg("returns"), py::arg("probs") = py::none(), py::arg("riskfree") = 0.0, py::arg("p") = 2.0,
        py::arg("delta") = 1.0);

    m.def(
        "markowitz_frontier",
        [](const Eigen::VectorXd& means, const Eigen::MatrixXd& cov, double riskfree, double target) {
            const auto pt = markowitz_frontier(means, cov, riskfree, target);
            return py::make_tuple(pt.weights, pt.stdev);
        },
        py::arg("means"), py::arg("cov"), py::arg("riskfree"), py::arg("target"));

    m.def("tangency_sharpe", &tangency_sharpe_check, py::arg("means"), py::arg("cov"), py::arg("riskfree"));

    m.def(
        "stopping_threshold",
        [](double mu, double sigma, double goal, double p, double s0) {
            const auto s = problem2_threshold(GbmParams{mu, sigma, s0}, goal, p);
            py::dict d;
            d["case"] = to_string(s.kind);
            d["gamma"] = s.gamma;
            d["b_star"] = s.b_star;
            d["c_star"] = s.c_star;
            d["value"] = s.value;
            return d;
        },
        py::arg("mu"), py::arg("sigma"), py::arg("goal"), py::arg("p") = 2.0, py::arg("s0") = 1.0);

    m.def(
        "control_value",
        [](double mu, double sigma, double p, double c, double horizon, std::size_t paths, std::uint64_t seed,
           unsigned threads) {
            const auto r = problem1_value(ControlSpec{c, p, horizon}, GbmParams{mu, sigma, 1.0}, paths, seed, threads);
            return py::make_tuple(r.value, r.stderr);
        },
        py::arg("mu"), py::arg("sigma"), py::arg("p") = 2.0, py::arg("c") = 1.0, py::arg("horizon") = 1.0,
        py::arg("paths") = 100000, py::arg("seed") = 42, py::arg("threads") = 1);

    m.def(
        "gbm_paths",
        [](double mu, double sigma, double s0, double horizon, std::size_t steps, std::size_t paths,
           std::uint64_t seed, unsigned threads) {
            auto a = gbm_paths(GbmParams{mu, sigma, s0}, horizon, steps, paths, seed, threads);
            py::array_t<double> out({a.n_paths, a.n_steps + 1});
            std::copy(a.values.begin(), a.values.end(), out.mutable_data());
            return out;
        },
        py::arg("mu"), py::arg("sigma"), py::arg("s0") = 1.0, py::arg("horizon") = 1.0, py::arg("steps") = 252,
        py::arg("paths") = 1000, py::arg("seed") = 42, py::arg("threads") = 1);
}

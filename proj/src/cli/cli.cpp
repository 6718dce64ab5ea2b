#include "msrkit/cli.hpp"

#include "msrkit/deviation.hpp"
#include "msrkit/error.hpp"
#include "msrkit/msr.hpp"
#include "msrkit/portfolio.hpp"
#include "msrkit/risk.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>
#include <ostream>

namespace msrkit::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Flags {
    std::string input;
    std::string market;
    std::string curve;
    std::string output = "json";
    double p = 2.0;
    double riskfree = 0.0;
    std::optional<double> level;
    std::optional<double> threshold;
    std::optional<double> delta;
    std::optional<double> target;
    std::optional<double> mu;
    std::optional<double> sigma;
    std::optional<double> goal;
    double s0 = 1.0;
    double horizon = 1.0;
    double c = 1.0;
    std::optional<std::size_t> paths;
    std::size_t steps = 252;
    std::uint64_t seed = 42;
    unsigned threads = 1;
};

// Rounds to the printed precision so JSON and CSV agree digit for digit.
Json number(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return std::strtod(format_number(v).c_str(), nullptr);
}

Json vector_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(number(v[i]));
    }
    return a;
}

template <class T>
const T& need(const std::optional<T>& v, const char* flag) {
    if (!v) {
        throw Error(ErrorKind::InvalidArgument, std::string("missing required flag ") + flag);
    }
    return *v;
}

const std::string& need(const std::string& v, const char* flag) {
    if (v.empty()) {
        throw Error(ErrorKind::InvalidArgument, std::string("missing required flag ") + flag);
    }
    return v;
}

void write_csv_rows(std::ostream& out, const std::string& a, const std::string& b,
                    const std::vector<std::pair<double, double>>& rows) {
    out << a << ',' << b << '\n';
    for (const auto& [x, y] : rows) {
        out << format_number(x) << ',' << format_number(y) << '\n';
    }
}

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            flatten(v, prefix.empty() ? k : prefix + "." + k, out);
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
        }
    } else if (j.is_number()) {
        out << prefix << ',' << format_number(j.get<double>()) << '\n';
    } else if (j.is_string()) {
        out << prefix << ',' << j.get<std::string>() << '\n';
    } else {
        out << prefix << ",\n";
    }
}

void emit(const Json& j, const Flags& f, std::ostream& out) {
    if (f.output == "csv") {
        out << "field,value\n";
        flatten(j, "", out);
    } else {
        out << j.dump() << '\n';
    }
}

GbmParams market_params(const Flags& f) {
    GbmParams g{need(f.mu, "--mu"), need(f.sigma, "--sigma"), f.s0};
    g.validate();
    return g;
}

void cmd_deviation(const Flags& f, std::ostream& out) {
    const auto d = load_distribution(need(f.input, "--input"));
    const auto r = lp_deviation(d, Exponent(f.p));
    emit(Json{{"sigma", number(r.sigma)}, {"center", number(r.center)}, {"p", number(f.p)}}, f, out);
}

void cmd_sharpe(const Flags& f, std::ostream& out) {
    const auto d = load_distribution(need(f.input, "--input"));
    const double s = lp_sharpe(d, Exponent(f.p), f.riskfree);
    emit(Json{{"sharpe", number(s)}, {"p", number(f.p)}, {"riskfree", number(f.riskfree)}}, f, out);
}

void cmd_msr(const Flags& f, std::ostream& out) {
    const auto d = load_distribution(need(f.input, "--input"));
    const auto r = msr(d, Exponent(f.p), f.riskfree);
    Json j;
    j["msr"] = std::isinf(r.value) ? Json("inf") : number(r.value);
    j["case"] = to_string(r.kind);
    if (r.c_star) {
        j["c_star"] = number(*r.c_star);
    }
    if (r.a_star) {
        j["a_star"] = number(*r.a_star);
    }
    if (r.b_star) {
        j["b_star"] = number(*r.b_star);
    }
    emit(j, f, out);
}

void cmd_cvar(const Flags& f, std::ostream& out) {
    const auto d = load_distribution(need(f.input, "--input"));
    const Exponent p(f.p);
    if (!f.curve.empty()) {
        write_csv_rows(out, "level", "cvar", emit_curve(CurveKind::CvarVsLevel, parse_grid(f.curve), {&d, f.p, {}, 1.0}));
        return;
    }
    const auto r = cvar(d, p, need(f.level, "--level"));
    Json j{{"cvar", number(r.value)}, {"level", number(r.level)}};
    j["center"] = r.center ? number(*r.center) : Json(nullptr);
    emit(j, f, out);
}

void cmd_bpoe(const Flags& f, std::ostream& out) {
    const auto d = load_distribution(need(f.input, "--input"));
    const Exponent p(f.p);
    if (!f.curve.empty()) {
        write_csv_rows(out, "x", "bpoe", emit_curve(CurveKind::BpoeVsX, parse_grid(f.curve), {&d, f.p, {}, 1.0}));
        return;
    }
    const auto r = bpoe(d, p, need(f.threshold, "--threshold"));
    Json j{{"bpoe", number(r.value)}, {"case", to_string(r.kind)}};
    j["c_star"] = r.c_star ? number(*r.c_star) : Json(nullptr);
    emit(j, f, out);
}

void cmd_portfolio(const Flags& f, std::ostream& out) {
    const auto m = load_market_json(need(f.market, "--market"));
    const Exponent p(f.p);
    const auto s = solve_bpoe_portfolio(m, p, need(f.delta, "--delta"));
    Json j{{"case", to_string(s.kind)}, {"delta", number(s.delta)}};
    j["objective"] = number(s.objective);
    j["bpoe"] = number(std::pow(s.objective, 1.0 / f.p));
    j["risky_direction"] = vector_json(s.risky_direction);
    j["weights"] = vector_json(s.full_weights);
    Json names = Json::array({"riskless"});
    for (Eigen::Index i = 0; i < m.n_assets(); ++i) {
        names.push_back(m.assets().empty() ? "asset" + std::to_string(i + 1) : m.assets()[static_cast<std::size_t>(i)]);
    }
    j["assets"] = names;
    emit(j, f, out);
}

void cmd_frontier(const Flags& f, std::ostream& out) {
    const auto m = load_market_json(need(f.market, "--market"));
    const auto means = m.means();
    const auto cov = m.covariance();
    if (!f.curve.empty()) {
        std::vector<std::pair<double, double>> rows;
        for (double mu : parse_grid(f.curve).points()) {
            rows.emplace_back(mu, markowitz_frontier(means, cov, m.riskfree(), mu).stdev);
        }
        write_csv_rows(out, "target", "stdev", rows);
        return;
    }
    const auto pt = markowitz_frontier(means, cov, m.riskfree(), need(f.target, "--target"));
    Json j{{"mean", number(pt.mean)}, {"stdev", number(pt.stdev)}};
    j["weights"] = vector_json(pt.weights);
    j["tangency_sharpe"] = number(tangency_sharpe_check(means, cov, m.riskfree()));
    emit(j, f, out);
}

void cmd_stop(const Flags& f, std::ostream& out) {
    const auto g = market_params(f);
    const double goal = need(f.goal, "--goal");
    if (!f.curve.empty()) {
        const auto grid = parse_grid(f.curve);
        const CurveSource src{nullptr, f.p, g, goal};
        const auto fb = emit_curve(CurveKind::FOfB, grid, src);
        const bool with_g = f.p == 2.0;
        const auto gb = with_g ? emit_curve(CurveKind::GOfB, grid, src) : decltype(fb){};
        out << (with_g ? "b,f,g\n" : "b,f\n");
        for (std::size_t i = 0; i < fb.size(); ++i) {
            out << format_number(fb[i].first) << ',' << format_number(fb[i].second);
            if (with_g) {
                out << ',' << format_number(gb[i].second);
            }
            out << '\n';
        }
        return;
    }
    const auto s = problem2_threshold(g, goal, f.p);
    Json j{{"case", to_string(s.kind)}, {"gamma", number(s.gamma)}, {"b_star", number(s.b_star)},
           {"c_star", number(s.c_star)}, {"value", number(s.value)}};
    if (f.paths && *f.paths > 0 && s.kind == StoppingCase::Threshold) {
        StoppingMcOptions opt;
        opt.n_paths = *f.paths;
        opt.seed = f.seed;
        opt.threads = f.threads;
        const auto mc = problem2_mc_validate(s, g, opt);
        j["mc"] = Json{{"objective", number(mc.objective.value)},
                       {"objective_stderr", number(mc.objective.stderr)},
                       {"hit_frequency", number(mc.hit_frequency.value)},
                       {"hit_stderr", number(mc.hit_frequency.stderr)},
                       {"hit_probability", number(mc.hit_probability)},
                       {"horizon_cap", number(mc.horizon_cap)},
                       {"cap_bias", number(mc.cap_bias)}};
    }
    emit(j, f, out);
}

void cmd_control(const Flags& f, std::ostream& out) {
    const auto g = market_params(f);
    const ControlSpec spec{f.c, f.p, f.horizon};
    const auto law = problem1_optimal_control(spec, g);
    Json j{{"y_start", number(law.y_start)}, {"y_drift", number(law.y_drift)},
           {"y_volatility", number(std::abs(law.y_volatility))}};
    const std::size_t n = f.paths.value_or(100000);
    if (n > 0) {
        const auto r = problem1_compare(spec, g, n, f.seed, f.threads);
        j["value"] = number(r.optimal.value);
        j["stderr"] = number(r.optimal.stderr);
        j["constant_value"] = number(r.constant.value);
        j["constant_stderr"] = number(r.constant.stderr);
        j["difference_stderr"] = number(r.difference_stderr);
    }
    emit(j, f, out);
}

void cmd_simulate(const Flags& f, std::ostream& out) {
    const auto g = market_params(f);
    const std::size_t n = f.paths.value_or(1000);
    const auto paths = gbm_paths(g, f.horizon, f.steps, n, f.seed, f.threads);
    if (f.output == "csv") {
        out << "path,t,price\n";
        for (std::size_t i = 0; i < paths.n_paths; ++i) {
            for (std::size_t k = 0; k <= paths.n_steps; ++k) {
                const double t = paths.horizon * static_cast<double>(k) / static_cast<double>(paths.n_steps);
                out << i << ',' << format_number(t) << ',' << format_number(paths.at(i, k)) << '\n';
            }
        }
        return;
    }
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += paths.terminal(i);
        sq += paths.terminal(i) * paths.terminal(i);
    }
    const double mean = sum / static_cast<double>(n);
    const double var = n > 1 ? (sq - sum * mean) / static_cast<double>(n - 1) : 0.0;
    emit(Json{{"paths", n},
              {"steps", f.steps},
              {"mean_terminal", number(mean)},
              {"stderr", number(std::sqrt(std::max(0.0, var) / static_cast<double>(n)))},
              {"expected_terminal", number(g.s0 * std::exp(g.mu * f.horizon))}},
         f, out);
}

int fail(std::ostream& err, const std::string& kind, const std::string& what, int code) {
    err << "msrkit: error: " << kind << ": " << what << '\n';
    return code;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monotone Sharpe ratio and buffered-probability toolkit", "msrkit"};
    app.require_subcommand(1);
    Flags f;

    auto add_p = [&](CLI::App* sub) {
        sub->add_option("--p", f.p, "exponent p >= 1")->capture_default_str();
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--output", f.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };
    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", f.input, "CSV samples or scenario JSON");
    };
    auto add_gbm = [&](CLI::App* sub) {
        sub->add_option("--mu", f.mu, "drift");
        sub->add_option("--sigma", f.sigma, "volatility");
        sub->add_option("--s0", f.s0, "initial price")->capture_default_str();
    };
    auto add_mc = [&](CLI::App* sub) {
        sub->add_option("--paths", f.paths, "Monte Carlo paths");
        sub->add_option("--seed", f.seed, "random seed")->capture_default_str();
        sub->add_option("--threads", f.threads, "worker threads (0 = all cores)")->capture_default_str();
    };

    std::vector<std::pair<CLI::App*, void (*)(const Flags&, std::ostream&)>> commands;
    auto command = [&](const char* name, const char* help, void (*fn)(const Flags&, std::ostream&)) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_output(sub);
        commands.emplace_back(sub, fn);
        return sub;
    };

    auto* dev = command("deviation", "Lp-deviation sigma_p", cmd_deviation);
    add_input(dev);
    add_p(dev);

    auto* sh = command("sharpe", "Lp-Sharpe ratio", cmd_sharpe);
    add_input(sh);
    add_p(sh);
    sh->add_option("--riskfree", f.riskfree, "riskless rate");

    auto* ms = command("msr", "monotone Sharpe ratio", cmd_msr);
    add_input(ms);
    add_p(ms);
    ms->add_option("--riskfree", f.riskfree, "riskless rate");

    auto* cv = command("cvar", "Lp-CVAR at a level, or a level curve", cmd_cvar);
    add_input(cv);
    add_p(cv);
    cv->add_option("--level", f.level, "risk level in [0, 1)");
    cv->add_option("--curve", f.curve, "lo:hi:step levels; emits CSV");

    auto* bp = command("bpoe", "buffered probability of exceedance", cmd_bpoe);
    add_input(bp);
    add_p(bp);
    bp->add_option("--threshold", f.threshold, "threshold x");
    bp->add_option("--curve", f.curve, "lo:hi:step thresholds; emits CSV");

    auto* pf = command("portfolio", "BPOE-optimal portfolio", cmd_portfolio);
    pf->add_option("--market", f.market, "market JSON");
    add_p(pf);
    pf->add_option("--delta", f.delta, "required expected premium");

    auto* fr = command("frontier", "Markowitz frontier point", cmd_frontier);
    fr->add_option("--market", f.market, "market JSON");
    fr->add_option("--target", f.target, "target expected return");
    fr->add_option("--curve", f.curve, "lo:hi:step targets; emits CSV");

    auto* st = command("stop", "optimal selling threshold", cmd_stop);
    add_gbm(st);
    add_p(st);
    add_mc(st);
    st->add_option("--goal", f.goal, "goal price x");
    st->add_option("--curve", f.curve, "lo:hi:step thresholds b; emits CSV of f (and g for p = 2)");

    auto* ct = command("control", "optimal proportional control", cmd_control);
    add_gbm(ct);
    add_p(ct);
    add_mc(ct);
    ct->add_option("--c", f.c, "target level c")->capture_default_str();
    ct->add_option("--horizon", f.horizon, "horizon T")->capture_default_str();

    auto* sim = command("simulate", "GBM paths", cmd_simulate);
    add_gbm(sim);
    add_mc(sim);
    sim->add_option("--horizon", f.horizon, "horizon T")->capture_default_str();
    sim->add_option("--steps", f.steps, "time steps")->capture_default_str();

    if (!args.empty() && !args.front().starts_with('-') && app.get_subcommand_no_throw(args.front()) == nullptr) {
        return fail(err, "usage", "unknown command '" + args.front() + "'", 2);
    }

    std::vector<const char*> argv{"msrkit"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        return fail(err, "usage", e.what(), 2);
    }

    try {
        for (const auto& [sub, fn] : commands) {
            if (sub->parsed()) {
                fn(f, out);
            }
        }
    } catch (const Error& e) {
        return fail(err, to_string(e.kind()), e.what(), e.is_solver_failure() ? 3 : 2);
    } catch (const std::exception& e) {
        return fail(err, "internal", e.what(), 3);
    }
    return 0;
}

} // namespace msrkit::cli

#include "msrkit/portfolio.hpp"

#include "msrkit/error.hpp"
#include "msrkit/optim.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace msrkit {

namespace {

constexpr double kPivotTolerance = 1e-12;

void require_spd(const Eigen::MatrixXd& cov) {
    if (cov.rows() == 0 || cov.rows() != cov.cols()) {
        throw Error(ErrorKind::SingularCovariance, "covariance must be a non-empty square matrix");
    }
    if (!cov.allFinite()) {
        throw Error(ErrorKind::SingularCovariance, "covariance has non-finite entries");
    }
    const double scale = cov.cwiseAbs().maxCoeff();
    if (!((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(scale, 1e-300))) {
        throw Error(ErrorKind::SingularCovariance, "covariance is not symmetric");
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > kPivotTolerance * scale)) {
        throw Error(ErrorKind::SingularCovariance, "covariance is not positive definite");
    }
}

Eigen::VectorXd excess_means(const Eigen::VectorXd& means, double riskfree) {
    return means.array() - riskfree;
}

class PortfolioObjective {
public:
    PortfolioObjective(const Eigen::MatrixXd& excess, const Eigen::VectorXd& probs, double p)
        : excess_(excess), probs_(probs), p_(p) {}

    double operator()(const Eigen::VectorXd& x) const {
        const Eigen::VectorXd r = excess_ * x;
        double s = 0.0;
        for (Eigen::Index i = 0; i < r.size(); ++i) {
            const double y = 1.0 - r[i];
            if (y > 0.0) {
                s += probs_[i] * (p_ == 1.0 ? y : (p_ == 2.0 ? y * y : std::pow(y, p_)));
            }
        }
        return s;
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
        const Eigen::VectorXd r = excess_ * x;
        Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
        for (Eigen::Index i = 0; i < r.size(); ++i) {
            const double y = 1.0 - r[i];
            if (y > 0.0) {
                g -= probs_[i] * p_ * std::pow(y, p_ - 1.0) * excess_.row(i).transpose();
            }
        }
        return g;
    }

    Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const {
        const Eigen::VectorXd r = excess_ * x;
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
        for (Eigen::Index i = 0; i < r.size(); ++i) {
            const double y = 1.0 - r[i];
            if (y > 0.0) {
                const Eigen::VectorXd row = excess_.row(i).transpose();
                h += probs_[i] * p_ * (p_ - 1.0) * std::pow(y, p_ - 2.0) * row * row.transpose();
            }
        }
        return h;
    }

private:
    const Eigen::MatrixXd& excess_;
    const Eigen::VectorXd& probs_;
    double p_;
};

// Exact line minimization of a convex function along x + t d.
double line_minimize(const PortfolioObjective& f, Eigen::VectorXd& x, double& fx, const Eigen::VectorXd& d) {
    optim::ScalarOptions opt;
    opt.tol = 1e-12;
    const auto rep = optim::minimize_scalar_convex([&](double t) { return f(x + t * d); }, {-1.0, 1.0}, opt);
    if (!rep.bracket_found) {
        throw Error(ErrorKind::SolverFailure, "no finite optimum: the scenarios admit an arbitrage direction");
    }
    if (rep.value < fx) {
        x += rep.argmin * d;
        const double drop = fx - rep.value;
        fx = rep.value;
        return drop;
    }
    return 0.0;
}

// Powell's conjugate-direction variant of coordinate descent.
void coordinate_descent(const PortfolioObjective& f, Eigen::VectorXd& x, double& fx, double scale) {
    const Eigen::Index n = x.size();
    std::vector<Eigen::VectorXd> dirs;
    for (Eigen::Index i = 0; i < n; ++i) {
        dirs.push_back(Eigen::VectorXd::Unit(n, i) * scale);
    }
    for (int sweep = 0; sweep < 500; ++sweep) {
        const Eigen::VectorXd x_old = x;
        const double f_old = fx;
        double biggest = 0.0;
        std::size_t biggest_idx = 0;
        for (std::size_t k = 0; k < dirs.size(); ++k) {
            const double drop = line_minimize(f, x, fx, dirs[k]);
            if (drop > biggest) {
                biggest = drop;
                biggest_idx = k;
            }
        }
        const Eigen::VectorXd moved = x - x_old;
        if (moved.norm() > 0.0) {
            const Eigen::VectorXd d = moved * (scale / moved.norm());
            line_minimize(f, x, fx, d);
            if (n > 1) {
                dirs.erase(dirs.begin() + static_cast<std::ptrdiff_t>(biggest_idx));
                dirs.push_back(d);
            }
        }
        if (!(x.norm() <= 1e8 * scale)) {
            throw Error(ErrorKind::SolverFailure, "portfolio iterate diverged");
        }
        if (f_old - fx <= 1e-15 * std::abs(f_old)) {
            break;
        }
    }
}

void newton_polish(const PortfolioObjective& f, Eigen::VectorXd& x, double& fx, double p) {
    if (!(p > 1.0)) {
        return;
    }
    for (int k = 0; k < 50; ++k) {
        const Eigen::VectorXd g = f.gradient(x);
        if (g.norm() <= 1e-14) {
            return;
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(f.hessian(x));
        if (ldlt.info() != Eigen::Success) {
            return;
        }
        const Eigen::VectorXd step = ldlt.solve(-g);
        if (!step.allFinite()) {
            return;
        }
        double t = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
            const double ft = f(x + t * step);
            if (ft < fx) {
                x += t * step;
                fx = ft;
                improved = true;
                break;
            }
        }
        if (!improved) {
            return;
        }
    }
}

} // namespace

MarketScenarios::MarketScenarios(Eigen::MatrixXd returns, std::vector<double> probs, double riskfree,
                                 std::vector<std::string> assets)
    : returns_(std::move(returns)), riskfree_(riskfree), assets_(std::move(assets)) {
    if (returns_.rows() == 0 || returns_.cols() == 0) {
        throw Error(ErrorKind::EmptyInput, "market needs at least one scenario and one risky asset");
    }
    if (!returns_.allFinite() || !std::isfinite(riskfree_)) {
        throw Error(ErrorKind::NonFiniteValue, "non-finite market return");
    }
    if (!assets_.empty() && static_cast<Eigen::Index>(assets_.size()) != returns_.cols()) {
        throw Error(ErrorKind::InvalidArgument, "asset names do not match the number of columns");
    }
    // Reuse the scenario rules for the probabilities.
    const std::size_t n = probs.size();
    const ScenarioDistribution law(std::vector<double>(n, 0.0), std::move(probs));
    if (static_cast<Eigen::Index>(law.size()) != returns_.rows()) {
        throw Error(ErrorKind::WeightError, "probabilities do not match the number of scenarios");
    }
    probs_ = Eigen::Map<const Eigen::VectorXd>(law.weights().data(), static_cast<Eigen::Index>(law.size()));
}

Eigen::MatrixXd MarketScenarios::excess_returns() const {
    return returns_.array() - riskfree_;
}

Eigen::VectorXd MarketScenarios::premia() const {
    return excess_returns().transpose() * probs_;
}

Eigen::VectorXd MarketScenarios::means() const {
    return returns_.transpose() * probs_;
}

Eigen::MatrixXd MarketScenarios::covariance() const {
    const Eigen::MatrixXd centered = returns_.rowwise() - means().transpose();
    Eigen::MatrixXd cov = centered.transpose() * probs_.asDiagonal() * centered;
    return 0.5 * (cov + cov.transpose());
}

ScenarioDistribution MarketScenarios::excess_return_distribution(const Eigen::VectorXd& risky) const {
    const Eigen::VectorXd r = excess_returns() * risky;
    return ScenarioDistribution(std::vector<double>(r.data(), r.data() + r.size()),
                                std::vector<double>(probs_.data(), probs_.data() + probs_.size()));
}

MarketScenarios parse_market_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("scenarios") || !doc["scenarios"].is_array()) {
        throw Error(ErrorKind::ParseError, "market JSON needs a \"scenarios\" array");
    }
    const auto& rows = doc["scenarios"];
    if (rows.empty() || !rows[0].is_array()) {
        throw Error(ErrorKind::ParseError, "\"scenarios\" must be a non-empty array of arrays");
    }
    const auto n_s = static_cast<Eigen::Index>(rows.size());
    const auto n_a = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd returns(n_s, n_a);
    for (Eigen::Index i = 0; i < n_s; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_a) {
            throw Error(ErrorKind::ParseError, "scenario rows must all have the same length");
        }
        for (Eigen::Index j = 0; j < n_a; ++j) {
            const auto& e = row[static_cast<std::size_t>(j)];
            if (!e.is_number()) {
                throw Error(ErrorKind::ParseError, "non-numeric scenario return");
            }
            returns(i, j) = e.get<double>();
        }
    }
    double riskfree = 0.0;
    if (doc.contains("riskfree")) {
        if (!doc["riskfree"].is_number()) {
            throw Error(ErrorKind::ParseError, "\"riskfree\" must be a number");
        }
        riskfree = doc["riskfree"].get<double>();
    }
    std::vector<double> probs;
    if (doc.contains("probs")) {
        if (!doc["probs"].is_array()) {
            throw Error(ErrorKind::ParseError, "\"probs\" must be an array");
        }
        for (const auto& e : doc["probs"]) {
            if (!e.is_number()) {
                throw Error(ErrorKind::ParseError, "non-numeric probability");
            }
            probs.push_back(e.get<double>());
        }
    } else {
        probs.assign(static_cast<std::size_t>(n_s), 1.0 / static_cast<double>(n_s));
    }
    std::vector<std::string> assets;
    if (doc.contains("assets")) {
        for (const auto& e : doc["assets"]) {
            if (!e.is_string()) {
                throw Error(ErrorKind::ParseError, "asset names must be strings");
            }
            assets.push_back(e.get<std::string>());
        }
    }
    return MarketScenarios(std::move(returns), std::move(probs), riskfree, std::move(assets));
}

MarketScenarios load_market_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_market_json(buf.str());
}

const char* to_string(PortfolioCase c) noexcept {
    switch (c) {
    case PortfolioCase::Solved: return "solved";
    case PortfolioCase::NoPremiumAchievable: return "no_premium_achievable";
    }
    return "unknown";
}

double bpoe_portfolio_objective(const MarketScenarios& m, Exponent p, const Eigen::VectorXd& risky) {
    const Eigen::MatrixXd excess = m.excess_returns();
    return PortfolioObjective(excess, m.probs(), p.p())(risky);
}

PortfolioSolution solve_bpoe_portfolio(const MarketScenarios& m, Exponent p, double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw Error(ErrorKind::InvalidArgument, "required premium delta must be positive");
    }
    const Eigen::Index n = m.n_assets();
    const Eigen::MatrixXd excess = m.excess_returns();
    const Eigen::VectorXd premia = m.premia();
    const double spread = excess.cwiseAbs().maxCoeff();

    PortfolioSolution sol;
    sol.delta = delta;
    if (!(premia.cwiseAbs().maxCoeff() > 1e-14 * std::max(spread, 1e-300))) {
        sol.kind = PortfolioCase::NoPremiumAchievable;
        sol.risky_direction = Eigen::VectorXd::Zero(n);
        sol.full_weights = Eigen::VectorXd::Zero(n + 1);
        sol.full_weights[0] = 1.0;
        sol.objective = 1.0;
        return sol;
    }

    const PortfolioObjective f(excess, m.probs(), p.p());
    const double scale = 1.0 / spread;

    // Starts: origin, +-unit directions of the two largest premia, then seeded random.
    std::vector<Eigen::VectorXd> starts{Eigen::VectorXd::Zero(n)};
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::abs(premia[a]) > std::abs(premia[b]); });
    for (std::size_t k = 0; k < std::min<std::size_t>(2, order.size()); ++k) {
        starts.push_back(Eigen::VectorXd::Unit(n, order[k]) * scale);
        starts.push_back(-Eigen::VectorXd::Unit(n, order[k]) * scale);
    }
    std::mt19937_64 rng(20170901);
    std::normal_distribution<double> normal;
    while (starts.size() < 8) {
        Eigen::VectorXd s(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            s[i] = normal(rng) * scale;
        }
        starts.push_back(s);
    }

    Eigen::VectorXd best;
    double best_f = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        Eigen::VectorXd x = s;
        double fx = f(x);
        coordinate_descent(f, x, fx, scale);
        newton_polish(f, x, fx, p.p());
        if (fx < best_f) {
            best_f = fx;
            best = x;
        }
    }

    // A zero objective means <x, R - r> >= 1 in every scenario: an arbitrage, so
    // the minimizer set is unbounded and the rescaled weights are arbitrary.
    if (best_f <= 0.0) {
        throw Error(ErrorKind::SolverFailure, "no finite optimum: the scenarios admit an arbitrage direction");
    }
    const double premium = premia.dot(best);
    if (!(premium > 0.0)) {
        throw Error(ErrorKind::SolverFailure, "optimal risky direction has a non-positive premium");
    }
    sol.kind = PortfolioCase::Solved;
    sol.risky_direction = best;
    sol.objective = best_f;
    sol.full_weights.resize(n + 1);
    double risky_total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        sol.full_weights[i + 1] = (delta * best[i]) / premium;
        risky_total += sol.full_weights[i + 1];
    }
    sol.full_weights[0] = 1.0 - risky_total;
    return sol;
}

FrontierPoint markowitz_frontier(const Eigen::VectorXd& means, const Eigen::MatrixXd& covariance, double riskfree,
                                 double mu_target) {
    require_spd(covariance);
    const Eigen::Index n = means.size();
    if (covariance.rows() != n) {
        throw Error(ErrorKind::InvalidArgument, "means and covariance dimensions differ");
    }
    const Eigen::VectorXd e = excess_means(means, riskfree);
    if (!(e.cwiseAbs().maxCoeff() > 0.0)) {
        if (mu_target != riskfree) {
            throw Error(ErrorKind::NoPremiumAchievable, "every risky mean equals the riskless rate");
        }
        FrontierPoint pt;
        pt.weights = Eigen::VectorXd::Zero(n + 1);
        pt.weights[0] = 1.0;
        pt.mean = riskfree;
        return pt;
    }
    // Unknowns: x_0..x_n, then two multipliers.
    const Eigen::Index m = n + 1;
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 2, m + 2);
    kkt.block(1, 1, n, n) = 2.0 * covariance;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double mean_i = i == 0 ? riskfree : means[i - 1];
        kkt(m, i) = kkt(i, m) = 1.0;
        kkt(m + 1, i) = kkt(i, m + 1) = mean_i;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 2);
    rhs[m] = 1.0;
    rhs[m + 1] = mu_target;
    const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);

    FrontierPoint pt;
    pt.weights = sol.head(m);
    const Eigen::VectorXd risky = pt.weights.tail(n);
    pt.mean = riskfree + e.dot(risky);
    pt.stdev = std::sqrt(std::max(0.0, risky.dot(covariance * risky)));
    return pt;
}

Eigen::VectorXd tangency_direction(const Eigen::VectorXd& means, const Eigen::MatrixXd& covariance,
                                   double riskfree) {
    require_spd(covariance);
    const Eigen::VectorXd e = excess_means(means, riskfree);
    if (!(e.cwiseAbs().maxCoeff() > 0.0)) {
        throw Error(ErrorKind::NoPremiumAchievable, "every risky mean equals the riskless rate");
    }
    return covariance.ldlt().solve(e);
}

double tangency_sharpe_check(const Eigen::VectorXd& means, const Eigen::MatrixXd& covariance, double riskfree) {
    const Eigen::VectorXd d = tangency_direction(means, covariance, riskfree);
    const Eigen::VectorXd e = excess_means(means, riskfree);
    return e.dot(d) / std::sqrt(d.dot(covariance * d));
}

} // namespace msrkit

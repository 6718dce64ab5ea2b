#pragma once

#include "msrkit/scenario.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace msrkit {

/// One-period market: a riskless asset with rate `riskfree` and n risky assets whose
/// joint returns are given scenario-wise (rows = scenarios, columns = assets).
class MarketScenarios {
public:
    MarketScenarios(Eigen::MatrixXd returns, std::vector<double> probs, double riskfree,
                    std::vector<std::string> assets = {});

    const Eigen::MatrixXd& returns() const noexcept { return returns_; }
    const Eigen::VectorXd& probs() const noexcept { return probs_; }
    double riskfree() const noexcept { return riskfree_; }
    const std::vector<std::string>& assets() const noexcept { return assets_; }
    Eigen::Index n_assets() const noexcept { return returns_.cols(); }
    Eigen::Index n_scenarios() const noexcept { return returns_.rows(); }

    /// R_i - r, scenario-wise.
    Eigen::MatrixXd excess_returns() const;
    /// E(R_i - r) per asset.
    Eigen::VectorXd premia() const;
    Eigen::VectorXd means() const;
    /// Probability-weighted (population) covariance of the risky returns.
    Eigen::MatrixXd covariance() const;

    /// Law of R_x - r for risky positions x (x_0 implied by the budget constraint).
    ScenarioDistribution excess_return_distribution(const Eigen::VectorXd& risky) const;

private:
    Eigen::MatrixXd returns_;
    Eigen::VectorXd probs_;
    double riskfree_;
    std::vector<std::string> assets_;
};

MarketScenarios parse_market_json(const std::string& text);
MarketScenarios load_market_json(const std::filesystem::path& path);

enum class PortfolioCase { Solved, NoPremiumAchievable };

const char* to_string(PortfolioCase c) noexcept;

struct PortfolioSolution {
    // Minimizer of E(1 - <x, R - r>)_+^p over risky positions.
    Eigen::VectorXd risky_direction;
    // Riskless weight first, then the risky assets; sums to one.
    Eigen::VectorXd full_weights;
    double delta = 0.0;
    // E(1 - <x, R - r>)_+^p at the optimum, i.e. P_p(r - R_x, 0)^p.
    double objective = 1.0;
    PortfolioCase kind = PortfolioCase::Solved;
};

double bpoe_portfolio_objective(const MarketScenarios& m, Exponent p, const Eigen::VectorXd& risky);

/// Minimizes the buffered probability of underperforming the riskless asset subject to
/// an expected premium delta > 0. Throws SolverFailure when no finite optimum exists
/// (the scenarios admit an arbitrage) or the optimum carries a non-positive premium.
PortfolioSolution solve_bpoe_portfolio(const MarketScenarios& m, Exponent p, double delta);

struct FrontierPoint {
    // Riskless weight first.
    Eigen::VectorXd weights;
    double mean = 0.0;
    double stdev = 0.0;
};

/// Minimum-variance portfolio with expected return mu_target, from the Lagrange
/// (KKT) system with the budget and return constraints. Throws SingularCovariance
/// unless the covariance is symmetric positive definite.
FrontierPoint markowitz_frontier(const Eigen::VectorXd& means, const Eigen::MatrixXd& covariance, double riskfree,
                                 double mu_target);

/// Sigma^{-1} (m - r), the risky direction shared by every efficient portfolio.
Eigen::VectorXd tangency_direction(const Eigen::VectorXd& means, const Eigen::MatrixXd& covariance,
                                   double riskfree);

/// Sharpe ratio of the tangency portfolio (the slope of the efficient frontier).
double tangency_sharpe_check(const Eigen::VectorXd& means, const Eigen::MatrixXd& covariance, double riskfree);

} // namespace msrkit

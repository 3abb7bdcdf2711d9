#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qport/market.hpp"

namespace qport {

enum class RebalancePolicy { Monthly, Quarterly, SemiAnnual, Annual, BuyAndHold };

RebalancePolicy policy_from_name(std::string_view name); // monthly|quarterly|semiannual|annual|buyhold
std::string_view policy_name(RebalancePolicy policy);

/// Months between rebalances; 0 means never after month 0.
std::uint32_t rebalance_period(RebalancePolicy policy);
bool rebalances_at(RebalancePolicy policy, std::uint32_t month);

/// One execution worth of sampled monthly log-returns, one row per shot in
/// the sampler's draw order.
struct ReturnPath {
    Eigen::MatrixXd returns; // months x assets
    std::uint64_t seed = 0;
    std::uint64_t execution_index = 0;
};

/// Maps a measured bitstring back to a monthly log-return vector through the
/// per-asset qubit blocks and the grid affine rule.
Eigen::VectorXd decode_bitstring(std::string_view bits, const Grid& grid,
                                 const QubitAllocation& alloc);
Eigen::VectorXd decode_index(std::uint64_t joint, const Grid& grid,
                             const QubitAllocation& alloc);

/// Full pipeline for one execution: discretize the model, synthesize, attach
/// measurement, simulate, sample `shots` outcomes and decode them in draw
/// order. Deterministic in (model, shots, seed).
ReturnPath run_execution(const MarketModel& model, std::uint64_t shots = 120,
                         std::uint64_t seed = 0, std::uint64_t execution_index = 0);

/// Sample covariance of the path (divisor N-1) minus the model covariance.
Eigen::MatrixXd delta_sigma(const MarketModel& model, const ReturnPath& path);

/// Deterministic discretization bias: grid-exact covariance minus the model
/// covariance. Independent of sampling noise.
Eigen::MatrixXd delta_sigma_disc(const MarketModel& model);

struct PortfolioReport {
    std::vector<double> wealth;       // months + 1 values, wealth[0] = 1
    Eigen::MatrixXd realized_weights; // months x assets, start-of-month
    double terminal_wealth = 1.0;
    std::optional<double> annualized_return; // set when months >= 12
    std::optional<double> annualized_vol;
    Eigen::MatrixXd delta_sigma;      // 0x0 unless a model was supplied
    Eigen::MatrixXd delta_sigma_disc;
};

/// Wealth starts at 1; holdings grow by exp(r) each month and are reset to
/// the target weights at the start of every rebalance month (month 0 always).
/// No transaction costs.
PortfolioReport backtest(const ReturnPath& path, const Eigen::VectorXd& weights,
                         RebalancePolicy policy, const MarketModel* model = nullptr);

struct AnnualizedStats {
    double annualized_return = 0.0; // terminal^(12/months) - 1
    double annualized_vol = 0.0;    // stdev of monthly portfolio log-returns * sqrt(12)
};

/// Requires at least 12 months of wealth history.
AnnualizedStats annualize(const std::vector<double>& wealth_path);

/// CSV with header `month,<asset1>,...` and log-returns at 17 significant
/// digits. `metadata` lines are emitted as '#' comments before the header.
std::string path_to_csv(const ReturnPath& path, const std::vector<std::string>& assets,
                        const std::vector<std::string>& metadata = {});
ReturnPath path_from_csv(std::string_view text);

std::string report_to_text(const PortfolioReport& report,
                           const std::vector<std::string>& assets,
                           RebalancePolicy policy, const Eigen::VectorXd& weights,
                           const std::vector<std::string>& metadata = {});

} // namespace qport

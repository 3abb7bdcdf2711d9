#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qport/distribution.hpp"

namespace qport {

/// Monthly index levels. Dates are YYYY-MM, strictly increasing, gap-free
/// unless loaded with forward_fill_gaps.
struct PriceSeries {
    std::vector<std::string> assets;
    std::vector<std::string> dates;
    Eigen::MatrixXd levels; // months x assets, all > 0
};

struct LoadOptions {
    bool forward_fill_gaps = false;
};

/// CSV layout: header `date,<asset1>,<asset2>,...`, one row per month.
/// Lines starting with '#' are ignored. Errors cite the offending row and
/// column.
PriceSeries load_prices(const std::filesystem::path& path, const LoadOptions& opts = {});

/// r[t][a] = ln(level[t+1][a] / level[t][a]); (months-1) x assets.
Eigen::MatrixXd monthly_log_returns(const PriceSeries& series);

/// Unbiased sample covariance (divisor N-1), exactly symmetric.
Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& returns);

struct MarketModel {
    std::vector<std::string> assets;
    Eigen::VectorXd mu_annual;      // arithmetic annual expected returns
    Eigen::VectorXd mu_monthly;     // ln(1 + mu_annual) / 12
    Eigen::MatrixXd sigma_monthly;  // monthly log-return covariance
    QubitAllocation alloc;
    double bounds_k = 3.0;
};

MarketModel build_model(const Eigen::MatrixXd& sigma_monthly,
                        std::vector<std::string> assets,
                        const Eigen::VectorXd& mu_annual,
                        QubitAllocation alloc, double bounds_k);

/// Calibrates sigma_monthly from the series' log returns.
MarketModel build_model(const PriceSeries& series, const Eigen::VectorXd& mu_annual,
                        QubitAllocation alloc, double bounds_k);

/// Structured text document with names, mu vectors, sigma (row-major) at 17
/// significant digits, allocation and bounds multiplier. Round-trips
/// bit-exactly.
std::string to_text(const MarketModel& model);
MarketModel model_from_text(std::string_view text);

void save_model(const std::filesystem::path& path, const MarketModel& model);
MarketModel load_model(const std::filesystem::path& path);

} // namespace qport

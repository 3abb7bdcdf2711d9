#include "qport/portfolio.hpp"

#include <cmath>

#include "qport/errors.hpp"
#include "qport/numeric.hpp"
#include "qport/statevec.hpp"
#include "qport/textio.hpp"

namespace qport {

RebalancePolicy policy_from_name(std::string_view name) {
    if (name == "monthly")
        return RebalancePolicy::Monthly;
    if (name == "quarterly")
        return RebalancePolicy::Quarterly;
    if (name == "semiannual")
        return RebalancePolicy::SemiAnnual;
    if (name == "annual")
        return RebalancePolicy::Annual;
    if (name == "buyhold")
        return RebalancePolicy::BuyAndHold;
    raise(ErrorCode::ParseError, "unknown policy '" + std::string(name) +
                                     "', expected monthly|quarterly|semiannual|"
                                     "annual|buyhold");
}

std::string_view policy_name(RebalancePolicy policy) {
    switch (policy) {
    case RebalancePolicy::Monthly:
        return "monthly";
    case RebalancePolicy::Quarterly:
        return "quarterly";
    case RebalancePolicy::SemiAnnual:
        return "semiannual";
    case RebalancePolicy::Annual:
        return "annual";
    case RebalancePolicy::BuyAndHold:
        return "buyhold";
    }
    return "?";
}

std::uint32_t rebalance_period(RebalancePolicy policy) {
    switch (policy) {
    case RebalancePolicy::Monthly:
        return 1;
    case RebalancePolicy::Quarterly:
        return 3;
    case RebalancePolicy::SemiAnnual:
        return 6;
    case RebalancePolicy::Annual:
        return 12;
    case RebalancePolicy::BuyAndHold:
        return 0;
    }
    return 0;
}

bool rebalances_at(RebalancePolicy policy, std::uint32_t month) {
    if (month == 0)
        return true;
    const std::uint32_t period = rebalance_period(policy);
    return period != 0 && month % period == 0;
}

Eigen::VectorXd decode_index(std::uint64_t joint, const Grid& grid,
                             const QubitAllocation& alloc) {
    if (grid.dims() != alloc.dims())
        raise(ErrorCode::DimensionMismatch, "grid and allocation dimensions differ");
    const std::vector<std::uint32_t> idx = split_index(alloc, joint);
    Eigen::VectorXd x(static_cast<Eigen::Index>(alloc.dims()));
    for (std::size_t d = 0; d < alloc.dims(); ++d)
        x(static_cast<Eigen::Index>(d)) = grid.axes[d].value(idx[d]);
    return x;
}

Eigen::VectorXd decode_bitstring(std::string_view bits, const Grid& grid,
                                 const QubitAllocation& alloc) {
    if (bits.size() != alloc.total_qubits())
        raise(ErrorCode::LengthMismatch,
              "bitstring has " + std::to_string(bits.size()) + " bits, allocation has " +
                  std::to_string(alloc.total_qubits()) + " qubits");
    return decode_index(index_of_bitstring(bits), grid, alloc);
}

ReturnPath run_execution(const MarketModel& model, std::uint64_t shots,
                         std::uint64_t seed, std::uint64_t execution_index) {
    const Grid grid = build_grid(model.alloc, model.mu_monthly, model.sigma_monthly,
                                 model.bounds_k);
    const DiscretizedDistribution dist =
        discretize(grid, model.mu_monthly, model.sigma_monthly);
    const Circuit circuit = combine_with_measurement(synthesize(dist));
    const StateVector state = simulate(circuit);

    ReturnPath path;
    path.execution_index = execution_index;
    path.seed = child_seed(seed, execution_index);
    const std::vector<std::uint64_t> outcomes = sample_indices(state, shots, path.seed);

    path.returns.resize(static_cast<Eigen::Index>(shots),
                        static_cast<Eigen::Index>(model.alloc.dims()));
    for (std::size_t t = 0; t < outcomes.size(); ++t)
        path.returns.row(static_cast<Eigen::Index>(t)) =
            decode_index(outcomes[t], grid, model.alloc).transpose();
    return path;
}

Eigen::MatrixXd delta_sigma(const MarketModel& model, const ReturnPath& path) {
    if (path.returns.cols() != model.sigma_monthly.rows())
        raise(ErrorCode::DimensionMismatch, "path and model asset counts differ");
    return estimate_covariance(path.returns) - model.sigma_monthly;
}

Eigen::MatrixXd delta_sigma_disc(const MarketModel& model) {
    const Grid grid = build_grid(model.alloc, model.mu_monthly, model.sigma_monthly,
                                 model.bounds_k);
    const DiscretizedDistribution dist =
        discretize(grid, model.mu_monthly, model.sigma_monthly);
    return grid_moments(dist).covariance - model.sigma_monthly;
}

PortfolioReport backtest(const ReturnPath& path, const Eigen::VectorXd& weights,
                         RebalancePolicy policy, const MarketModel* model) {
    const Eigen::Index months = path.returns.rows();
    const Eigen::Index assets = path.returns.cols();
    if (months == 0)
        raise(ErrorCode::EmptyPath, "return path has no months");
    if (weights.size() != assets)
        raise(ErrorCode::DimensionMismatch,
              std::to_string(weights.size()) + " weights for " +
                  std::to_string(assets) + " assets");
    double wsum = 0.0;
    for (Eigen::Index a = 0; a < assets; ++a) {
        if (weights(a) < 0.0)
            raise(ErrorCode::BadWeights,
                  "weight " + format_g17(weights(a)) + " is negative");
        wsum += weights(a);
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        raise(ErrorCode::BadWeights,
              "weights sum to " + format_g17(wsum) + ", expected 1");

    PortfolioReport report;
    report.wealth.resize(static_cast<std::size_t>(months) + 1);
    report.wealth[0] = 1.0;
    report.realized_weights.resize(months, assets);

    Eigen::VectorXd holdings = weights; // wealth 1 at month 0, always rebalanced
    for (Eigen::Index t = 0; t < months; ++t) {
        const double w = report.wealth[static_cast<std::size_t>(t)];
        if (rebalances_at(policy, static_cast<std::uint32_t>(t)))
            holdings = w * weights;
        report.realized_weights.row(t) = (holdings / w).transpose();
        double next = 0.0;
        for (Eigen::Index a = 0; a < assets; ++a) {
            holdings(a) *= std::exp(path.returns(t, a));
            next += holdings(a);
        }
        report.wealth[static_cast<std::size_t>(t) + 1] = next;
    }
    report.terminal_wealth = report.wealth.back();

    if (months >= 12) {
        const AnnualizedStats stats = annualize(report.wealth);
        report.annualized_return = stats.annualized_return;
        report.annualized_vol = stats.annualized_vol;
    }
    if (model != nullptr) {
        report.delta_sigma = delta_sigma(*model, path);
        report.delta_sigma_disc = delta_sigma_disc(*model);
    }
    return report;
}

AnnualizedStats annualize(const std::vector<double>& wealth_path) {
    if (wealth_path.size() < 13)
        raise(ErrorCode::TooShort,
              "annualization needs at least 12 months, got " +
                  std::to_string(wealth_path.empty() ? 0 : wealth_path.size() - 1));
    const std::size_t months = wealth_path.size() - 1;

    AnnualizedStats stats;
    const double growth = wealth_path.back() / wealth_path.front();
    stats.annualized_return =
        std::pow(growth, 12.0 / static_cast<double>(months)) - 1.0;

    std::vector<double> lr(months);
    for (std::size_t t = 0; t < months; ++t)
        lr[t] = std::log(wealth_path[t + 1] / wealth_path[t]);
    double mean = 0.0;
    for (double v : lr)
        mean += v;
    mean /= static_cast<double>(months);
    double ss = 0.0;
    for (double v : lr)
        ss += (v - mean) * (v - mean);
    stats.annualized_vol =
        std::sqrt(ss / static_cast<double>(months - 1)) * std::sqrt(12.0);
    return stats;
}

std::string path_to_csv(const ReturnPath& path, const std::vector<std::string>& assets,
                        const std::vector<std::string>& metadata) {
    if (static_cast<Eigen::Index>(assets.size()) != path.returns.cols())
        raise(ErrorCode::DimensionMismatch,
              std::to_string(assets.size()) + " asset names for " +
                  std::to_string(path.returns.cols()) + " return columns");

    std::string out;
    for (const std::string& line : metadata)
        out += "# " + line + "\n";
    out += "# seed " + std::to_string(path.seed) + "\n";
    out += "# execution " + std::to_string(path.execution_index) + "\n";
    out += "month";
    for (const std::string& name : assets)
        out += "," + name;
    out += "\n";
    for (Eigen::Index t = 0; t < path.returns.rows(); ++t) {
        out += std::to_string(t);
        for (Eigen::Index a = 0; a < path.returns.cols(); ++a)
            out += "," + format_g17(path.returns(t, a));
        out += "\n";
    }
    return out;
}

ReturnPath path_from_csv(std::string_view text) {
    ReturnPath path;
    std::vector<std::string> rows;
    std::size_t columns = 0;
    for (std::string& raw : split(text, '\n')) {
        const std::string_view line = trim(raw);
        if (line.empty())
            continue;
        if (line.front() == '#') {
            const std::vector<std::string> f = split(std::string(line.substr(1)), ' ');
            std::vector<std::string> words;
            for (const std::string& w : f)
                if (!w.empty())
                    words.push_back(w);
            if (words.size() == 2 && words[0] == "seed")
                path.seed = parse_u64(words[1], "path seed");
            else if (words.size() == 2 && words[0] == "execution")
                path.execution_index = parse_u64(words[1], "path execution");
            continue;
        }
        if (columns == 0) { // header
            const std::vector<std::string> header = split(std::string(line), ',');
            if (header.size() < 2 || trim(header[0]) != "month")
                raise(ErrorCode::ParseError, "path header must be month,<assets...>");
            columns = header.size();
            continue;
        }
        rows.push_back(std::string(line));
    }
    if (columns == 0)
        raise(ErrorCode::ParseError, "path csv has no header");
    if (rows.empty())
        raise(ErrorCode::EmptyPath, "path csv has no data rows");

    path.returns.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(columns - 1));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const std::vector<std::string> f = split(rows[t], ',');
        if (f.size() != columns)
            raise(ErrorCode::ParseError,
                  "path row " + std::to_string(t) + " has " + std::to_string(f.size()) +
                      " fields, expected " + std::to_string(columns));
        const std::uint64_t month = parse_u64(trim(f[0]), "path month");
        if (month != t)
            raise(ErrorCode::ParseError, "path months must run 0,1,2,...; row " +
                                             std::to_string(t) + " says " +
                                             std::to_string(month));
        for (std::size_t a = 0; a + 1 < columns; ++a)
            path.returns(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(a)) =
                parse_double(trim(f[a + 1]), "path return");
    }
    return path;
}

namespace {

void append_matrix(std::string& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j)
                out += ' ';
            out += format_g17(m(i, j));
        }
        out += '\n';
    }
}

} // namespace

std::string report_to_text(const PortfolioReport& report,
                           const std::vector<std::string>& assets,
                           RebalancePolicy policy, const Eigen::VectorXd& weights,
                           const std::vector<std::string>& metadata) {
    std::string out;
    for (const std::string& line : metadata)
        out += "# " + line + "\n";
    out += "qport-report v1\n";
    out += "assets ";
    for (std::size_t a = 0; a < assets.size(); ++a) {
        if (a)
            out += ',';
        out += assets[a];
    }
    out += "\npolicy " + std::string(policy_name(policy)) + "\n";
    out += "target-weights";
    for (Eigen::Index a = 0; a < weights.size(); ++a)
        out += " " + format_g17(weights(a));
    out += "\nmonths " + std::to_string(report.realized_weights.rows()) + "\n";
    out += "terminal-wealth " + format_g17(report.terminal_wealth) + "\n";
    out += "annualized-return " + (report.annualized_return
                                       ? format_g17(*report.annualized_return)
                                       : std::string("n/a")) + "\n";
    out += "annualized-vol " + (report.annualized_vol
                                    ? format_g17(*report.annualized_vol)
                                    : std::string("n/a")) + "\n";
    if (report.delta_sigma.size() > 0) {
        out += "delta-sigma-max " +
               format_g17(report.delta_sigma.cwiseAbs().maxCoeff()) + "\n";
        out += "delta-sigma\n";
        append_matrix(out, report.delta_sigma);
    }
    if (report.delta_sigma_disc.size() > 0) {
        out += "delta-sigma-disc\n";
        append_matrix(out, report.delta_sigma_disc);
    }
    out += "wealth\n";
    for (std::size_t t = 0; t < report.wealth.size(); ++t)
        out += std::to_string(t) + " " + format_g17(report.wealth[t]) + "\n";
    out += "realized-weights\n";
    for (Eigen::Index t = 0; t < report.realized_weights.rows(); ++t) {
        out += std::to_string(t);
        for (Eigen::Index a = 0; a < report.realized_weights.cols(); ++a)
            out += " " + format_g17(report.realized_weights(t, a));
        out += "\n";
    }
    return out;
}

} // namespace qport

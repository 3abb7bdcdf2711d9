#include "qport/market.hpp"

#include <cmath>

#include "qport/errors.hpp"
#include "qport/textio.hpp"

namespace qport {

namespace {

// "YYYY-MM" -> months since year 0; strict format and month range checks.
int parse_month(std::string_view date, std::size_t row) {
    const std::string where = "prices row " + std::to_string(row) + " date";
    if (date.size() != 7 || date[4] != '-')
        raise(ErrorCode::ParseError, where + " must be YYYY-MM, got '" +
                                         std::string(date) + "'");
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u})
        if (date[i] < '0' || date[i] > '9')
            raise(ErrorCode::ParseError, where + " must be YYYY-MM, got '" +
                                             std::string(date) + "'");
    const int year = (date[0] - '0') * 1000 + (date[1] - '0') * 100 +
                     (date[2] - '0') * 10 + (date[3] - '0');
    const int month = (date[5] - '0') * 10 + (date[6] - '0');
    if (month < 1 || month > 12)
        raise(ErrorCode::ParseError, where + " month out of range in '" +
                                         std::string(date) + "'");
    return year * 12 + (month - 1);
}

std::string format_month(int index) {
    const int year = index / 12;
    const int month = index % 12 + 1;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

} // namespace

PriceSeries load_prices(const std::filesystem::path& path, const LoadOptions& opts) {
    const std::string text = read_text_file(path);

    std::vector<std::string> lines;
    for (std::string& raw : split(text, '\n')) {
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        lines.push_back(std::string(line));
    }
    if (lines.empty())
        raise(ErrorCode::ParseError, "prices file has no header");

    PriceSeries series;
    {
        const std::vector<std::string> header = split(lines[0], ',');
        if (header.empty() || trim(header[0]) != "date")
            raise(ErrorCode::ParseError, "prices header must start with 'date'");
        for (std::size_t c = 1; c < header.size(); ++c) {
            const std::string name(trim(header[c]));
            if (name.empty())
                raise(ErrorCode::ParseError, "prices header column " +
                                                 std::to_string(c) + " is empty");
            for (const std::string& seen : series.assets)
                if (seen == name)
                    raise(ErrorCode::ParseError, "duplicate asset '" + name + "'");
            series.assets.push_back(name);
        }
        if (series.assets.empty())
            raise(ErrorCode::ParseError, "prices header lists no assets");
    }

    const std::size_t assets = series.assets.size();
    std::vector<std::string> dates;
    std::vector<std::vector<double>> rows;
    int prev_month = 0;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const std::vector<std::string> fields = split(lines[r], ',');
        if (fields.size() != assets + 1)
            raise(ErrorCode::ParseError,
                  "prices row " + std::to_string(r) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(assets + 1));
        const std::string date(trim(fields[0]));
        const int month = parse_month(date, r);
        std::vector<double> levels(assets);
        for (std::size_t a = 0; a < assets; ++a) {
            const std::string where = "prices row " + std::to_string(r) + " column '" +
                                      series.assets[a] + "'";
            levels[a] = parse_double(trim(fields[a + 1]), where);
            if (!(levels[a] > 0.0))
                raise(ErrorCode::NonPositiveLevel,
                      where + " is " + format_g17(levels[a]) +
                          ", levels must be positive");
        }
        if (!dates.empty()) {
            if (month <= prev_month)
                raise(ErrorCode::UnorderedDates,
                      "prices row " + std::to_string(r) + ": " + date +
                          " does not follow " + dates.back());
            if (month != prev_month + 1) {
                if (!opts.forward_fill_gaps)
                    raise(ErrorCode::UnorderedDates,
                          "prices row " + std::to_string(r) + ": gap between " +
                              dates.back() + " and " + date +
                              " (enable forward fill to bridge it)");
                for (int fill = prev_month + 1; fill < month; ++fill) {
                    dates.push_back(format_month(fill));
                    rows.push_back(rows.back());
                }
            }
        }
        dates.push_back(date);
        rows.push_back(std::move(levels));
        prev_month = month;
    }
    if (rows.size() < 2)
        raise(ErrorCode::TooFewRows, "prices file has " + std::to_string(rows.size()) +
                                         " data rows, need at least 2");

    series.dates = std::move(dates);
    series.levels.resize(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(assets));
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t a = 0; a < assets; ++a)
            series.levels(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(a)) =
                rows[t][a];
    return series;
}

Eigen::MatrixXd monthly_log_returns(const PriceSeries& series) {
    const Eigen::Index months = series.levels.rows();
    const Eigen::Index assets = series.levels.cols();
    if (months < 2)
        raise(ErrorCode::TooFewRows, "need at least 2 months of prices for returns");
    Eigen::MatrixXd r(months - 1, assets);
    for (Eigen::Index t = 0; t + 1 < months; ++t)
        for (Eigen::Index a = 0; a < assets; ++a)
            r(t, a) = std::log(series.levels(t + 1, a) / series.levels(t, a));
    return r;
}

Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& returns) {
    const Eigen::Index n = returns.rows();
    const Eigen::Index a = returns.cols();
    if (n < 2)
        raise(ErrorCode::TooFewRows, "covariance needs at least 2 return rows");

    const Eigen::RowVectorXd mean = returns.colwise().mean();
    const Eigen::MatrixXd centered = returns.rowwise() - mean;
    // upper triangle mirrored onto the lower, so the result is exactly symmetric
    Eigen::MatrixXd cov(a, a);
    for (Eigen::Index i = 0; i < a; ++i)
        for (Eigen::Index j = i; j < a; ++j) {
            const double c = centered.col(i).dot(centered.col(j)) /
                             static_cast<double>(n - 1);
            cov(i, j) = c;
            cov(j, i) = c;
        }
    return cov;
}

MarketModel build_model(const Eigen::MatrixXd& sigma_monthly,
                        std::vector<std::string> assets,
                        const Eigen::VectorXd& mu_annual,
                        QubitAllocation alloc, double bounds_k) {
    const auto d = static_cast<Eigen::Index>(assets.size());
    if (d == 0)
        raise(ErrorCode::DimensionMismatch, "model needs at least one asset");
    if (mu_annual.size() != d)
        raise(ErrorCode::DimensionMismatch,
              std::to_string(mu_annual.size()) + " expected returns for " +
                  std::to_string(d) + " assets");
    if (sigma_monthly.rows() != d || sigma_monthly.cols() != d)
        raise(ErrorCode::DimensionMismatch,
              "covariance is " + std::to_string(sigma_monthly.rows()) + "x" +
                  std::to_string(sigma_monthly.cols()) + " for " + std::to_string(d) +
                  " assets");
    if (alloc.dims() != assets.size())
        raise(ErrorCode::DimensionMismatch,
              "allocation has " + std::to_string(alloc.dims()) + " dimensions for " +
                  std::to_string(d) + " assets");
    if (!(bounds_k > 0.0))
        raise(ErrorCode::ParseError, "bounds-k must be positive");

    const double asym = (sigma_monthly - sigma_monthly.transpose())
                            .cwiseAbs()
                            .maxCoeff();
    if (asym > 1e-12)
        raise(ErrorCode::NonSymmetric,
              "covariance asymmetry " + format_g17(asym) + " exceeds 1e-12");
    Eigen::MatrixXd sigma = 0.5 * (sigma_monthly + sigma_monthly.transpose());

    for (Eigen::Index i = 0; i < d; ++i)
        if (!(sigma(i, i) > 0.0))
            raise(ErrorCode::DegenerateVariance,
                  "variance of asset '" + assets[static_cast<std::size_t>(i)] +
                      "' is not positive");

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-10)
        raise(ErrorCode::NotPSD, "covariance has eigenvalue " +
                                     format_g17(eig.eigenvalues().minCoeff()));

    MarketModel model;
    model.assets = std::move(assets);
    model.mu_annual = mu_annual;
    model.mu_monthly.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!(mu_annual(i) > -1.0))
            raise(ErrorCode::ParseError,
                  "annual return " + format_g17(mu_annual(i)) +
                      " must exceed -1 (total loss)");
        model.mu_monthly(i) = std::log1p(mu_annual(i)) / 12.0;
    }
    model.sigma_monthly = std::move(sigma);
    model.alloc = std::move(alloc);
    model.bounds_k = bounds_k;
    return model;
}

MarketModel build_model(const PriceSeries& series, const Eigen::VectorXd& mu_annual,
                        QubitAllocation alloc, double bounds_k) {
    return build_model(estimate_covariance(monthly_log_returns(series)), series.assets,
                       mu_annual, std::move(alloc), bounds_k);
}

std::string to_text(const MarketModel& model) {
    const auto d = static_cast<Eigen::Index>(model.assets.size());
    std::string out = "qport-model v1\n";
    out += "assets ";
    for (Eigen::Index i = 0; i < d; ++i) {
        if (i)
            out += ',';
        out += model.assets[static_cast<std::size_t>(i)];
    }
    out += "\nalloc " + model.alloc.str() + "\n";
    out += "bounds-k " + format_g17(model.bounds_k) + "\n";
    out += "mu-annual";
    for (Eigen::Index i = 0; i < d; ++i)
        out += " " + format_g17(model.mu_annual(i));
    out += "\nmu-monthly";
    for (Eigen::Index i = 0; i < d; ++i)
        out += " " + format_g17(model.mu_monthly(i));
    out += "\nsigma-monthly\n";
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (j)
                out += ' ';
            out += format_g17(model.sigma_monthly(i, j));
        }
        out += '\n';
    }
    return out;
}

MarketModel model_from_text(std::string_view text) {
    std::vector<std::string> lines;
    for (std::string& raw : split(text, '\n')) {
        const std::string_view t = trim(raw);
        if (!t.empty() && t.front() != '#')
            lines.push_back(std::string(t));
    }

    std::size_t at = 0;
    auto next = [&]() -> const std::string& {
        if (at >= lines.size())
            raise(ErrorCode::ParseError, "model text ended early");
        return lines[at++];
    };
    auto field = [](const std::string& line, std::string_view key) {
        if (!line.starts_with(key) || line.size() <= key.size() ||
            line[key.size()] != ' ')
            raise(ErrorCode::ParseError, "expected '" + std::string(key) + "' line");
        return line.substr(key.size() + 1);
    };

    if (next() != "qport-model v1")
        raise(ErrorCode::ParseError, "not a qport-model v1 file");

    MarketModel model;
    for (const std::string& name : split(field(next(), "assets"), ','))
        model.assets.push_back(std::string(trim(name)));
    const auto d = static_cast<Eigen::Index>(model.assets.size());

    model.alloc = QubitAllocation::parse(field(next(), "alloc"));
    model.bounds_k = parse_double(field(next(), "bounds-k"), "bounds-k");

    auto parse_vec = [&](const std::string& body, std::string_view what) {
        std::vector<double> v;
        for (const std::string& token : split(body, ' '))
            if (!trim(token).empty())
                v.push_back(parse_double(token, what));
        if (static_cast<Eigen::Index>(v.size()) != d)
            raise(ErrorCode::DimensionMismatch, std::string(what) + " has " +
                                                    std::to_string(v.size()) +
                                                    " entries for " +
                                                    std::to_string(d) + " assets");
        return Eigen::Map<const Eigen::VectorXd>(v.data(), d).eval();
    };
    model.mu_annual = parse_vec(field(next(), "mu-annual"), "mu-annual");
    model.mu_monthly = parse_vec(field(next(), "mu-monthly"), "mu-monthly");

    if (next() != "sigma-monthly")
        raise(ErrorCode::ParseError, "expected 'sigma-monthly' line");
    model.sigma_monthly.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const Eigen::VectorXd row = parse_vec(next(), "sigma-monthly row");
        model.sigma_monthly.row(i) = row.transpose();
    }
    if (at != lines.size())
        raise(ErrorCode::ParseError, "trailing content after sigma-monthly");
    if (model.alloc.dims() != model.assets.size())
        raise(ErrorCode::DimensionMismatch, "allocation does not match asset count");
    return model;
}

void save_model(const std::filesystem::path& path, const MarketModel& model) {
    write_text_file(path, to_text(model));
}

MarketModel load_model(const std::filesystem::path& path) {
    return model_from_text(read_text_file(path));
}

} // namespace qport

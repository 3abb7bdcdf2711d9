#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qport/errors.hpp"
#include "qport/kernels.hpp"
#include "qport/market.hpp"
#include "qport/portfolio.hpp"
#include "qport/statevec.hpp"
#include "qport/textio.hpp"
#include "qport/version.hpp"

namespace {

using namespace qport;

// Everything a run needs, resolved from flags. Outputs embed these values in
// their metadata headers, so a rerun with the same flags is byte-identical.
struct RunConfig {
    std::string prices;
    std::string mu_annual;
    std::string alloc = "3,3,3";
    double bounds_k = 3.0;
    std::string model;
    std::uint64_t shots = 120;
    std::uint64_t executions = 1;
    std::uint64_t seed = 0;
    std::string weights;
    std::string policy;
    std::string returns;
    std::string kernel = "auto";
    std::string out;
};

std::string meta_head(const RunConfig& cfg, std::string_view command,
                      std::initializer_list<std::string> params) {
    std::string head;
    head += std::string("# ") + std::string(kToolName) + " " + std::string(kVersion) +
            "\n";
    head += "# command " + std::string(command) + "\n";
    for (const std::string& p : params)
        head += "# " + p + "\n";
    head += "# seed " + std::to_string(cfg.seed) + "\n";
    return head;
}

Eigen::VectorXd parse_vector_flag(const std::string& text, std::string_view flag) {
    const std::vector<double> v = parse_double_list(text, flag);
    return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                             static_cast<Eigen::Index>(v.size()));
}

int run_calibrate(const RunConfig& cfg) {
    const PriceSeries series = load_prices(cfg.prices);
    const Eigen::VectorXd mu = parse_vector_flag(cfg.mu_annual, "--mu-annual");
    const MarketModel model = build_model(series, mu, QubitAllocation::parse(cfg.alloc),
                                          cfg.bounds_k);

    std::string doc = meta_head(cfg, "calibrate",
                                {"prices " + cfg.prices, "mu-annual " + cfg.mu_annual,
                                 "alloc " + cfg.alloc,
                                 "bounds-k " + format_g17(cfg.bounds_k)});
    doc += to_text(model);
    write_text_file(cfg.out, doc);

    std::printf("calibrated %zu assets over %zu months\n", model.assets.size(),
                series.dates.size());
    for (std::size_t a = 0; a < model.assets.size(); ++a)
        std::printf("  %s: mu_monthly=%s sigma_monthly=%s\n", model.assets[a].c_str(),
                    format_g17(model.mu_monthly(static_cast<Eigen::Index>(a))).c_str(),
                    format_g17(model.sigma_monthly(static_cast<Eigen::Index>(a),
                                                   static_cast<Eigen::Index>(a)))
                        .c_str());
    std::printf("model written to %s\n", cfg.out.c_str());
    return 0;
}

int run_build_circuit(const RunConfig& cfg) {
    const MarketModel model = load_model(cfg.model);

    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };

    const Grid grid =
        build_grid(model.alloc, model.mu_monthly, model.sigma_monthly, model.bounds_k);
    auto t0 = clock::now();
    const DiscretizedDistribution dist =
        discretize(grid, model.mu_monthly, model.sigma_monthly);
    const double discretize_ms = ms_since(t0);

    t0 = clock::now();
    const Circuit native = synthesize(dist);
    const double synthesize_ms = ms_since(t0);

    t0 = clock::now();
    const Circuit lowered = lower(native);
    const double lower_ms = ms_since(t0);

    const Circuit measured = combine_with_measurement(native);
    const auto native_counts = gate_counts(native);
    const auto lowered_counts = gate_counts(lowered);
    const std::uint64_t predicted =
        (std::uint64_t{1} << model.alloc.total_qubits()) - 1;

    const std::filesystem::path dir(cfg.out);
    std::filesystem::create_directories(dir);

    const std::string head =
        meta_head(cfg, "build-circuit", {"model " + cfg.model});
    write_text_file(dir / "circuit.txt", head + to_text(measured));

    std::string report = head;
    report += "alloc " + model.alloc.str() + "\n";
    report += "total-qubits " + std::to_string(model.alloc.total_qubits()) + "\n";
    report += "native-ry " + std::to_string(native_counts.at(GateKind::RY)) + "\n";
    report += "native-mcry " + std::to_string(native_counts.at(GateKind::MCRY)) + "\n";
    report += "lowered-ry " + std::to_string(lowered_counts.at(GateKind::RY)) + "\n";
    report += "lowered-cx " + std::to_string(lowered_counts.at(GateKind::CX)) + "\n";
    report += "predicted-ry " + std::to_string(predicted) + "\n";
    report += "discretize-ms " + format_g17(discretize_ms) + "\n";
    report += "synthesize-ms " + format_g17(synthesize_ms) + "\n";
    report += "lower-ms " + format_g17(lower_ms) + "\n";
    write_text_file(dir / "cost_report.txt", report);

    std::printf("alloc %s: lowered RY %" PRIu64 " (predicted %" PRIu64
                "), CX %" PRIu64 "\n",
                model.alloc.str().c_str(), lowered_counts.at(GateKind::RY), predicted,
                lowered_counts.at(GateKind::CX));
    std::printf("discretize %.3f ms, synthesize %.3f ms, lower %.3f ms\n",
                discretize_ms, synthesize_ms, lower_ms);
    std::printf("circuit and cost report written to %s\n", dir.string().c_str());
    return 0;
}

int run_simulate(const RunConfig& cfg) {
    kernels::select(kernels::backend_from_name(cfg.kernel));
    const MarketModel model = load_model(cfg.model);

    const std::filesystem::path dir(cfg.out);
    std::filesystem::create_directories(dir);

    const std::vector<std::string> meta{
        std::string(kToolName) + " " + std::string(kVersion),
        "command simulate",
        "model " + cfg.model,
        "alloc " + model.alloc.str(),
        "shots " + std::to_string(cfg.shots),
        "executions " + std::to_string(cfg.executions),
        "base-seed " + std::to_string(cfg.seed),
        "kernel " + cfg.kernel,
    };

    std::vector<double> max_abs(cfg.executions);
    std::string summary = meta_head(cfg, "simulate",
                                    {"model " + cfg.model, "alloc " + model.alloc.str(),
                                     "shots " + std::to_string(cfg.shots),
                                     "executions " + std::to_string(cfg.executions),
                                     "kernel " + cfg.kernel});
    summary += "execution,seed,max_abs_delta_sigma\n";

    for (std::uint64_t e = 0; e < cfg.executions; ++e) {
        const ReturnPath path = run_execution(model, cfg.shots, cfg.seed, e);
        char name[40];
        std::snprintf(name, sizeof name, "execution_%04" PRIu64 ".csv", e);
        write_text_file(dir / name, path_to_csv(path, model.assets, meta));

        const Eigen::MatrixXd ds = delta_sigma(model, path);
        max_abs[e] = ds.cwiseAbs().maxCoeff();
        summary += std::to_string(e) + "," + std::to_string(path.seed) + "," +
                   format_g17(max_abs[e]) + "\n";
    }

    std::vector<double> sorted = max_abs;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t h = sorted.size() / 2;
    const double median =
        sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
    double mean = 0.0;
    for (double v : sorted)
        mean += v;
    mean /= static_cast<double>(sorted.size());
    const double disc_max =
        delta_sigma_disc(model).cwiseAbs().maxCoeff();

    summary += "# pooled median_max_abs " + format_g17(median) + "\n";
    summary += "# pooled mean_max_abs " + format_g17(mean) + "\n";
    summary += "# pooled min_max_abs " + format_g17(sorted.front()) + "\n";
    summary += "# pooled max_max_abs " + format_g17(sorted.back()) + "\n";
    summary += "# disc max_abs " + format_g17(disc_max) + "\n";
    write_text_file(dir / "delta_sigma_summary.csv", summary);

    std::printf("%" PRIu64 " executions x %" PRIu64
                " shots: median max|delta sigma| = %s\n",
                cfg.executions, cfg.shots, format_g17(median).c_str());
    std::printf("outputs written to %s\n", dir.string().c_str());
    return 0;
}

int run_backtest(const RunConfig& cfg) {
    const ReturnPath path = path_from_csv(read_text_file(cfg.returns));
    const Eigen::VectorXd weights = parse_vector_flag(cfg.weights, "--weights");
    const RebalancePolicy policy = policy_from_name(cfg.policy);

    MarketModel model;
    const MarketModel* model_ptr = nullptr;
    if (!cfg.model.empty()) {
        model = load_model(cfg.model);
        model_ptr = &model;
    }
    const PortfolioReport report = backtest(path, weights, policy, model_ptr);

    std::vector<std::string> assets(static_cast<std::size_t>(path.returns.cols()));
    for (std::size_t a = 0; a < assets.size(); ++a)
        assets[a] = model_ptr ? model.assets[a] : "asset" + std::to_string(a);

    std::vector<std::string> meta{
        std::string(kToolName) + " " + std::string(kVersion),
        "command backtest",
        "returns " + cfg.returns,
        "weights " + cfg.weights,
        "policy " + cfg.policy,
    };
    if (!cfg.model.empty())
        meta.push_back("model " + cfg.model);
    write_text_file(cfg.out, report_to_text(report, assets, policy, weights, meta));

    std::printf("terminal wealth %s over %lld months\n",
                format_g17(report.terminal_wealth).c_str(),
                static_cast<long long>(path.returns.rows()));
    if (report.annualized_return)
        std::printf("annualized return %s, vol %s\n",
                    format_g17(*report.annualized_return).c_str(),
                    format_g17(*report.annualized_vol).c_str());
    std::printf("report written to %s\n", cfg.out.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"classical reproduction of a quantum multi-period "
                 "asset-allocation experiment"};
    app.set_config("--config");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qport::kToolName) + " " +
                                          std::string(qport::kVersion));

    CLI::App* cal = app.add_subcommand(
        "calibrate", "estimate a market model from monthly price history");
    cal->add_option("--prices", cfg.prices, "monthly price CSV (date,asset,...)")
        ->required();
    cal->add_option("--mu-annual", cfg.mu_annual,
                    "expected annual returns, comma list")
        ->required();
    cal->add_option("--alloc", cfg.alloc, "qubits per asset, comma list")
        ->capture_default_str();
    cal->add_option("--bounds-k", cfg.bounds_k, "grid half-width in std deviations")
        ->capture_default_str();
    cal->add_option("--out", cfg.out, "model file to write")->required();
    cal->callback([&] { run_calibrate(cfg); });

    CLI::App* bld = app.add_subcommand(
        "build-circuit", "synthesize the state-preparation circuit for a model");
    bld->add_option("--model", cfg.model, "model file from calibrate")->required();
    bld->add_option("--out", cfg.out, "output directory")->required();
    bld->callback([&] { run_build_circuit(cfg); });

    CLI::App* sim = app.add_subcommand(
        "simulate", "sample return paths and report delta-sigma diagnostics");
    sim->add_option("--model", cfg.model, "model file from calibrate")->required();
    sim->add_option("--shots", cfg.shots, "samples per execution (months)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sim->add_option("--executions", cfg.executions, "independent executions")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sim->add_option("--seed", cfg.seed, "base seed; executions use child seeds")
        ->capture_default_str();
    sim->add_option("--kernel", cfg.kernel, "simulator backend: auto|scalar|avx2")
        ->capture_default_str();
    sim->add_option("--out", cfg.out, "output directory")->required();
    sim->callback([&] { run_simulate(cfg); });

    CLI::App* bt = app.add_subcommand(
        "backtest", "run a rebalanced portfolio over a sampled return path");
    bt->add_option("--returns", cfg.returns, "return path CSV from simulate")
        ->required();
    bt->add_option("--weights", cfg.weights, "target weights, comma list")->required();
    bt->add_option("--policy", cfg.policy,
                   "monthly|quarterly|semiannual|annual|buyhold")
        ->required();
    bt->add_option("--model", cfg.model, "model file for delta-sigma diagnostics");
    bt->add_option("--out", cfg.out, "report file to write")->required();
    bt->callback([&] { run_backtest(cfg); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: UsageError: %s\n", e.what());
        std::fprintf(stderr, "run with --help for usage\n");
        return 2;
    } catch (const qport::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code() == qport::ErrorCode::IoError ? 1 : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: Internal: %s\n", e.what());
        return 1;
    }
    return 0;
}

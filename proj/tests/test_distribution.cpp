#include <cmath>
#include <functional>

#include <doctest.h>

#include "qport/distribution.hpp"
#include "qport/errors.hpp"
#include "qport/market.hpp"
#include "qport/statevec.hpp"
#include "qport/textio.hpp"

using namespace qport;

namespace {

void check_error(ErrorCode code, const std::function<void()>& fn) {
    try {
        fn();
        FAIL("expected an Error to be thrown");
    } catch (const Error& e) {
        CHECK(e.code() == code);
    }
}

MarketModel fixture_model() {
    const PriceSeries series = load_prices(QPORT_DATA_DIR "/prices_fixture.csv");
    Eigen::VectorXd mu(3);
    mu << 0.10, 0.10, 0.06;
    return build_model(series, mu, QubitAllocation::parse("3,3,3"), 3.0);
}

DiscretizedDistribution fixture_dist(const MarketModel& m) {
    return discretize(build_grid(m.alloc, m.mu_monthly, m.sigma_monthly, m.bounds_k),
                      m.mu_monthly, m.sigma_monthly);
}

} // namespace

TEST_CASE("allocation parsing, offsets and joint index splitting") {
    const QubitAllocation alloc = QubitAllocation::parse(" 3, 2 ,4 ");
    CHECK(alloc.qubits_per_dim == std::vector<std::uint32_t>{3, 2, 4});
    CHECK(alloc.dims() == 3);
    CHECK(alloc.total_qubits() == 9);
    CHECK(alloc.offset(0) == 0);
    CHECK(alloc.offset(1) == 3);
    CHECK(alloc.offset(2) == 5);
    CHECK(alloc.str() == "3,2,4");

    const std::uint64_t joint = (std::uint64_t{5} << 0) | (std::uint64_t{2} << 3) |
                                (std::uint64_t{9} << 5);
    CHECK(split_index(alloc, joint) == std::vector<std::uint32_t>{5, 2, 9});

    check_error(ErrorCode::ParseError, [] { QubitAllocation::parse(""); });
    check_error(ErrorCode::ParseError, [] { QubitAllocation::parse("3,0,3"); });
    check_error(ErrorCode::ParseError, [] { QubitAllocation::parse("3,x"); });
    check_error(ErrorCode::CapacityExceeded, [] { QubitAllocation::parse("32,32"); });
}

TEST_CASE("grid endpoints are attained exactly") {
    Eigen::VectorXd mu(1);
    mu << 0.007;
    Eigen::MatrixXd sigma(1, 1);
    sigma << 0.0021;
    const Grid grid = build_grid(QubitAllocation::parse("3"), mu, sigma, 3.0);
    REQUIRE(grid.dims() == 1);
    const GridAxis& ax = grid.axes[0];
    const double sd = std::sqrt(0.0021);
    CHECK(ax.low == 0.007 - 3.0 * sd);
    CHECK(ax.high == 0.007 + 3.0 * sd);
    CHECK(ax.num_points == 8);
    CHECK(ax.value(0) == ax.low);
    CHECK(ax.value(7) == ax.high);
    for (std::uint32_t i = 1; i < 8; ++i)
        CHECK(ax.value(i) > ax.value(i - 1));
}

TEST_CASE("build_grid validates shapes and variances") {
    Eigen::VectorXd mu(2);
    mu << 0.0, 0.0;
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(2, 2);
    check_error(ErrorCode::DimensionMismatch, [&] {
        (void)build_grid(QubitAllocation::parse("3"), mu, sigma, 3.0);
    });
    check_error(ErrorCode::ParseError, [&] {
        (void)build_grid(QubitAllocation::parse("3,3"), mu, sigma, 0.0);
    });
    Eigen::MatrixXd degenerate = sigma;
    degenerate(1, 1) = 0.0;
    check_error(ErrorCode::DegenerateVariance, [&] {
        (void)build_grid(QubitAllocation::parse("3,3"), mu, degenerate, 3.0);
    });
}

TEST_CASE("1D discretization matches the closed-form density") {
    Eigen::VectorXd mu(1);
    mu << 0.4;
    Eigen::MatrixXd sigma(1, 1);
    sigma << 0.09;
    const Grid grid = build_grid(QubitAllocation::parse("4"), mu, sigma, 3.0);
    const DiscretizedDistribution dist = discretize(grid, mu, sigma);

    REQUIRE(dist.size() == 16);
    double sum = 0.0;
    for (double p : dist.probabilities)
        sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-12);

    std::vector<double> expect(16);
    double esum = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double z = (grid.axes[0].value(i) - 0.4) / 0.3;
        expect[i] = std::exp(-0.5 * z * z);
        esum += expect[i];
    }
    for (int i = 0; i < 16; ++i)
        CHECK(dist.probabilities[i] == doctest::Approx(expect[i] / esum).epsilon(1e-12));
}

TEST_CASE("2D discretization matches the explicit bivariate density") {
    Eigen::VectorXd mu(2);
    mu << 0.01, -0.02;
    Eigen::MatrixXd sigma(2, 2);
    sigma << 0.04, 0.018, 0.018, 0.025;
    const Grid grid = build_grid(QubitAllocation::parse("3,2"), mu, sigma, 3.0);
    const DiscretizedDistribution dist = discretize(grid, mu, sigma);
    REQUIRE(dist.size() == 32);

    const double det = 0.04 * 0.025 - 0.018 * 0.018;
    std::vector<double> expect(32);
    double esum = 0.0;
    for (std::uint64_t j = 0; j < 32; ++j) {
        const auto idx = split_index(dist.alloc, j);
        const double dx = grid.axes[0].value(idx[0]) - 0.01;
        const double dy = grid.axes[1].value(idx[1]) + 0.02;
        const double quad =
            (0.025 * dx * dx - 2 * 0.018 * dx * dy + 0.04 * dy * dy) / det;
        expect[j] = std::exp(-0.5 * quad);
        esum += expect[j];
    }
    for (std::uint64_t j = 0; j < 32; ++j)
        CHECK(dist.probabilities[j] ==
              doctest::Approx(expect[j] / esum).epsilon(1e-12));
}

TEST_CASE("fixture-model probabilities match the numpy oracle") {
    const MarketModel model = fixture_model();
    const DiscretizedDistribution dist = fixture_dist(model);
    REQUIRE(dist.size() == 512);

    // frozen from tools/compute_oracles.py
    CHECK(dist.probabilities[0] ==
          doctest::Approx(2.7188665660111282e-05).epsilon(1e-12));
    CHECK(dist.probabilities[1] ==
          doctest::Approx(2.9837930003439452e-05).epsilon(1e-12));
    CHECK(dist.probabilities[255] ==
          doctest::Approx(0.00035832064068320741).epsilon(1e-12));
    CHECK(dist.probabilities[256] ==
          doctest::Approx(0.00035832064068320741).epsilon(1e-12));
    CHECK(dist.probabilities[511] ==
          doctest::Approx(2.7188665660111282e-05).epsilon(1e-12));

    // indices 219 and 292 are mirror images of each other around the mean and
    // tie to rounding; either may win the scan
    std::uint64_t argmax = 0;
    for (std::uint64_t j = 1; j < 512; ++j)
        if (dist.probabilities[j] > dist.probabilities[argmax])
            argmax = j;
    CHECK((argmax == 219 || argmax == 292));
    CHECK(dist.probabilities[219] ==
          doctest::Approx(dist.probabilities[292]).epsilon(1e-12));
    CHECK(dist.probabilities[292] ==
          doctest::Approx(0.065652499907402517).epsilon(1e-12));
}

TEST_CASE("discretize rejects singular covariance") {
    Eigen::VectorXd mu(2);
    mu << 0.0, 0.0;
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.0, 1.0, 1.0, 1.0; // rank 1
    Grid grid;
    grid.axes = {GridAxis{-1, 1, 4}, GridAxis{-1, 1, 4}};
    check_error(ErrorCode::SingularCovariance, [&] { (void)discretize(grid, mu, sigma); });
}

TEST_CASE("synthesized amplitudes carry the discrete distribution") {
    const MarketModel model = fixture_model();
    const DiscretizedDistribution dist = fixture_dist(model);
    const Circuit circuit = synthesize(dist);

    CHECK(circuit.num_qubits == 9);
    const auto counts = gate_counts(circuit);
    CHECK(counts.at(GateKind::RY) == 1);
    CHECK(counts.at(GateKind::MCRY) == 8);
    CHECK(counts.at(GateKind::RZ) == 0);
    CHECK(counts.at(GateKind::CX) == 0);
    CHECK(circuit.ops.front().target == 8);

    const StateVector state = simulate(circuit);
    const auto probs = probabilities(state);
    double worst = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        worst = std::max(worst, std::abs(probs[j] - dist.probabilities[j]));
        CHECK(state.amplitudes[j].imag() == 0.0);
        CHECK(state.amplitudes[j].real() >= 0.0);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("lowered state-prep matches the gate-count law") {
    for (std::uint32_t n : {3u, 6u}) {
        QubitAllocation alloc;
        alloc.qubits_per_dim = {n};
        const SynthesisCost cost = synthesis_cost(alloc, 1);
        CHECK(cost.total_qubits == n);
        CHECK(cost.predicted_ry == (std::uint64_t{1} << n) - 1);
        CHECK(cost.lowered_counts.at(GateKind::RY) == cost.predicted_ry);
        CHECK(cost.lowered_counts.at(GateKind::CX) == (std::uint64_t{1} << n) - 2);
        CHECK(cost.lowered_counts.at(GateKind::MCRY) == 0);
        CHECK(cost.native_counts.at(GateKind::RY) == 1);
        CHECK(cost.native_counts.at(GateKind::MCRY) == n - 1);
        CHECK(cost.discretize_ms >= 0.0);
        CHECK(cost.synthesize_ms >= 0.0);
        CHECK(cost.lower_ms >= 0.0);
    }
}

TEST_CASE("measurement marker is single-use") {
    Circuit c(2);
    c.ry(0, 0.4);
    const Circuit measured = combine_with_measurement(c);
    CHECK(measured.measured);
    CHECK_FALSE(c.measured);
    check_error(ErrorCode::AlreadyMeasured,
                [&] { (void)combine_with_measurement(measured); });
}

TEST_CASE("grid moments sit on the model for a symmetric grid") {
    const MarketModel model = fixture_model();
    const GridMoments m = grid_moments(fixture_dist(model));
    for (Eigen::Index d = 0; d < 3; ++d) {
        const double sd = std::sqrt(model.sigma_monthly(d, d));
        // grid and density are symmetric about mu, so the mean deviation is
        // pure rounding; the 0.02*sd budget is the documented ceiling
        CHECK(std::abs(m.mean(d) - model.mu_monthly(d)) < 1e-15);
        CHECK(std::abs(m.mean(d) - model.mu_monthly(d)) < 0.02 * sd);
    }
    CHECK((m.covariance - m.covariance.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("permuting assets permutes the joint probabilities") {
    Eigen::VectorXd mu(2);
    mu << 0.01, -0.03;
    Eigen::MatrixXd sigma(2, 2);
    sigma << 0.04, 0.012, 0.012, 0.09;

    Eigen::VectorXd mu_p(2);
    mu_p << -0.03, 0.01;
    Eigen::MatrixXd sigma_p(2, 2);
    sigma_p << 0.09, 0.012, 0.012, 0.04;

    const QubitAllocation a12 = QubitAllocation::parse("3,2");
    const QubitAllocation a21 = QubitAllocation::parse("2,3");
    const DiscretizedDistribution d =
        discretize(build_grid(a12, mu, sigma, 3.0), mu, sigma);
    const DiscretizedDistribution dp =
        discretize(build_grid(a21, mu_p, sigma_p, 3.0), mu_p, sigma_p);

    for (std::uint64_t j = 0; j < d.size(); ++j) {
        const auto idx = split_index(a12, j);
        const std::uint64_t jp = idx[1] | (std::uint64_t{idx[0]} << 2);
        CHECK(std::abs(d.probabilities[j] - dp.probabilities[jp]) < 1e-13);
    }
}

TEST_CASE("distribution text round-trips bit-exactly") {
    Eigen::VectorXd mu(2);
    mu << 0.0, 0.1;
    Eigen::MatrixXd sigma(2, 2);
    sigma << 0.5, 0.1, 0.1, 0.3;
    const DiscretizedDistribution dist =
        discretize(build_grid(QubitAllocation::parse("2,3"), mu, sigma, 3.0), mu, sigma);
    const DiscretizedDistribution back = distribution_from_text(to_text(dist));
    CHECK(back.alloc == dist.alloc);
    REQUIRE(back.size() == dist.size());
    for (std::size_t j = 0; j < dist.size(); ++j)
        CHECK(back.probabilities[j] == dist.probabilities[j]);
    for (std::size_t d = 0; d < 2; ++d) {
        CHECK(back.grid.axes[d].low == dist.grid.axes[d].low);
        CHECK(back.grid.axes[d].high == dist.grid.axes[d].high);
        CHECK(back.grid.axes[d].num_points == dist.grid.axes[d].num_points);
    }

    check_error(ErrorCode::ParseError, [] { (void)distribution_from_text("junk"); });
}

TEST_CASE("synthesize validates the probability array length") {
    DiscretizedDistribution dist;
    dist.alloc = QubitAllocation::parse("2");
    dist.grid.axes = {GridAxis{0, 1, 4}};
    dist.probabilities = {0.5, 0.5};
    check_error(ErrorCode::DimensionMismatch, [&] { (void)synthesize(dist); });
}

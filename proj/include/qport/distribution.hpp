#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qport/circuit.hpp"

namespace qport {

/// Qubits assigned per asset, e.g. {3,3,3}. Asset 0 occupies the least
/// significant qubit block: joint index = sum_d idx_d << offset_d with
/// offset_d = q_0 + ... + q_{d-1}.
struct QubitAllocation {
    std::vector<std::uint32_t> qubits_per_dim;

    std::size_t dims() const { return qubits_per_dim.size(); }
    std::uint32_t total_qubits() const;
    std::uint32_t offset(std::size_t dim) const;

    static QubitAllocation parse(std::string_view text); // "3,3,3"
    std::string str() const;

    bool operator==(const QubitAllocation&) const = default;
};

/// Evenly spaced grid over [low, high] with 2^q points per axis, endpoints
/// attained exactly.
struct GridAxis {
    double low = 0.0;
    double high = 0.0;
    std::uint32_t num_points = 2;

    double step() const { return (high - low) / (num_points - 1); }
    double value(std::uint32_t i) const;
};

struct Grid {
    std::vector<GridAxis> axes;
    std::size_t dims() const { return axes.size(); }
};

struct DiscretizedDistribution {
    QubitAllocation alloc;
    Grid grid;
    std::vector<double> probabilities; // joint index order, sums to 1

    std::size_t size() const { return probabilities.size(); }
};

/// Per dimension i: low = mu[i] - k*sqrt(sigma[i][i]), high = mu[i] + k*...,
/// 2^q_i points. k defaults to 3 at the call sites that take a model.
Grid build_grid(const QubitAllocation& alloc, const Eigen::VectorXd& mu_monthly,
                const Eigen::MatrixXd& sigma_monthly, double bounds_k);

/// Pointwise multivariate normal density on the joint grid, normalized to
/// sum 1 (pairwise summation; see numeric.hpp).
DiscretizedDistribution discretize(const Grid& grid, const Eigen::VectorXd& mu_monthly,
                                   const Eigen::MatrixXd& sigma_monthly);

/// State-preparation circuit whose simulated amplitude at index(x) is
/// sqrt(p(x)), all real and nonnegative: recursive bisection over conditional
/// probabilities, one RY level plus one multiplexed-RY level per remaining
/// qubit. Uses only RY/MCRY gates.
Circuit synthesize(const DiscretizedDistribution& dist);

/// Marks the terminal full measurement; sampling downstream is legal only on
/// measured circuits. Throws Error(AlreadyMeasured) on a measured input.
Circuit combine_with_measurement(const Circuit& circuit);

/// Mean and covariance of the discrete distribution by direct summation over
/// all joint grid points. This is the deterministic reference the sampled
/// covariance diagnostics are compared against.
struct GridMoments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
};
GridMoments grid_moments(const DiscretizedDistribution& dist);

/// Build-cost probe for one allocation: predicted lowered RY count (2^n - 1)
/// plus measured wall times for a standard-normal load of that shape.
/// Timings are medians over `repeats` runs.
struct SynthesisCost {
    QubitAllocation alloc;
    std::uint32_t total_qubits = 0;
    std::uint64_t predicted_ry = 0;
    std::map<GateKind, std::uint64_t> native_counts;
    std::map<GateKind, std::uint64_t> lowered_counts;
    double discretize_ms = 0.0;
    double synthesize_ms = 0.0;
    double lower_ms = 0.0;
};
SynthesisCost synthesis_cost(const QubitAllocation& alloc, int repeats = 5);

/// Grid metadata plus the probability array at 17 significant digits, for
/// oracle cross-checks. Round-trips bit-exactly.
std::string to_text(const DiscretizedDistribution& dist);
DiscretizedDistribution distribution_from_text(std::string_view text);

/// Splits a joint index into per-dimension grid indices.
std::vector<std::uint32_t> split_index(const QubitAllocation& alloc, std::uint64_t joint);

} // namespace qport

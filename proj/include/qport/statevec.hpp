#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qport/circuit.hpp"

namespace qport {

/// Dense pure state over num_qubits qubits. Qubit 0 is the least significant
/// bit of the amplitude index; bitstrings are printed most significant qubit
/// first.
struct StateVector {
    std::uint32_t num_qubits = 0;
    std::vector<std::complex<double>> amplitudes;

    double norm() const; // L2, pairwise-summed
};

struct SimOptions {
    std::uint32_t max_qubits = 24; // guard against runaway 2^n allocation
#ifdef NDEBUG
    bool check_norm = false;
#else
    bool check_norm = true; // verify |norm - 1| < 1e-12 after every gate
#endif
};

/// Applies each gate in order to |0...0>. Throws Error(CapacityExceeded) when
/// the circuit is wider than opts.max_qubits.
StateVector simulate(const Circuit& circuit, const SimOptions& opts = {});

/// |amplitude|^2 per index, via the active kernel backend.
std::vector<double> probabilities(const StateVector& state);

struct ShotResult {
    std::map<std::string, std::uint64_t> counts; // bitstring -> occurrences
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

/// Outcome index of every shot in draw order. Pure function of
/// (state, shots, seed): inverse-CDF sampling driven by mt19937_64, with the
/// raw-to-unit mapping pinned in numeric.hpp, so counts are bit-identical
/// across platforms.
std::vector<std::uint64_t> sample_indices(const StateVector& state,
                                          std::uint64_t shots, std::uint64_t seed);

/// Aggregated counts keyed by bitstring.
ShotResult sample(const StateVector& state, std::uint64_t shots, std::uint64_t seed);

std::string bitstring_of(std::uint64_t index, std::uint32_t num_qubits);
std::uint64_t index_of_bitstring(std::string_view bits);

} // namespace qport

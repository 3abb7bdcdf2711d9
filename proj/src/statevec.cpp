#include "qport/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qport/errors.hpp"
#include "qport/kernels.hpp"
#include "qport/numeric.hpp"

namespace qport {

double StateVector::norm() const {
    std::vector<double> sq(amplitudes.size());
    kernels::active().abs2(amplitudes.data(), sq.data(), sq.size());
    return std::sqrt(pairwise_sum(sq));
}

namespace {

// Native multiplexor: for each control value v the target pair rotates by
// angles[v]. Runs per index pair, reading the control bits directly, so no
// lowering is needed to simulate MCRY.
void apply_mcry(std::vector<std::complex<double>>& amps, const GateOp& op) {
    std::vector<std::uint32_t> controls = op.controls;
    std::sort(controls.begin(), controls.end());

    const std::uint64_t tmask = std::uint64_t{1} << op.target;
    std::vector<double> c(op.angles.size()), s(op.angles.size());
    for (std::size_t v = 0; v < op.angles.size(); ++v) {
        c[v] = std::cos(op.angles[v] / 2);
        s[v] = std::sin(op.angles[v] / 2);
    }

    const std::uint64_t size = amps.size();
    for (std::uint64_t base = 0; base < size; base += 2 * tmask) {
        for (std::uint64_t off = 0; off < tmask; ++off) {
            const std::uint64_t i0 = base + off;
            std::uint64_t v = 0;
            for (std::size_t b = 0; b < controls.size(); ++b)
                v |= ((i0 >> controls[b]) & 1) << b;
            const std::uint64_t i1 = i0 | tmask;
            const auto a0 = amps[i0];
            const auto a1 = amps[i1];
            amps[i0] = c[v] * a0 - s[v] * a1;
            amps[i1] = s[v] * a0 + c[v] * a1;
        }
    }
}

} // namespace

StateVector simulate(const Circuit& circuit, const SimOptions& opts) {
    validate(circuit);
    if (circuit.num_qubits > opts.max_qubits)
        raise(ErrorCode::CapacityExceeded,
              "circuit needs " + std::to_string(circuit.num_qubits) +
                  " qubits, limit is " + std::to_string(opts.max_qubits));

    StateVector state;
    state.num_qubits = circuit.num_qubits;
    state.amplitudes.assign(std::uint64_t{1} << circuit.num_qubits, {0.0, 0.0});
    state.amplitudes[0] = {1.0, 0.0};

    const auto& k = kernels::active();
    auto* amps = state.amplitudes.data();
    const std::size_t size = state.amplitudes.size();

    for (const GateOp& op : circuit.ops) {
        const std::uint64_t tmask = std::uint64_t{1} << op.target;
        switch (op.kind) {
        case GateKind::RY:
            k.apply_ry(amps, size, tmask, std::cos(op.angles[0] / 2),
                       std::sin(op.angles[0] / 2));
            break;
        case GateKind::RZ:
            k.apply_rz(amps, size, tmask, std::cos(op.angles[0] / 2),
                       std::sin(op.angles[0] / 2));
            break;
        case GateKind::CX:
            k.apply_cx(amps, size, std::uint64_t{1} << op.controls[0], tmask);
            break;
        case GateKind::MCRY:
            apply_mcry(state.amplitudes, op);
            break;
        }
        if (opts.check_norm) {
            const double n = state.norm();
            if (std::abs(n - 1.0) > 1e-12)
                throw std::logic_error("statevector norm drifted to " +
                                       std::to_string(n));
        }
    }
    return state;
}

std::vector<double> probabilities(const StateVector& state) {
    std::vector<double> out(state.amplitudes.size());
    kernels::active().abs2(state.amplitudes.data(), out.data(), out.size());
    return out;
}

std::vector<std::uint64_t> sample_indices(const StateVector& state,
                                          std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0)
        raise(ErrorCode::ZeroShots, "shots must be positive");

    const std::vector<double> probs = probabilities(state);
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    std::uint64_t last = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
        if (probs[i] > 0.0)
            last = i;
    }

    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> out(shots);
    for (std::uint64_t t = 0; t < shots; ++t) {
        const double u = uniform_unit(rng()) * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        // u can round up to acc; fall back to the last nonzero outcome
        out[t] = it == cdf.end() ? last : static_cast<std::uint64_t>(it - cdf.begin());
    }
    return out;
}

ShotResult sample(const StateVector& state, std::uint64_t shots, std::uint64_t seed) {
    ShotResult result;
    result.shots = shots;
    result.seed = seed;
    for (std::uint64_t idx : sample_indices(state, shots, seed))
        ++result.counts[bitstring_of(idx, state.num_qubits)];
    return result;
}

std::string bitstring_of(std::uint64_t index, std::uint32_t num_qubits) {
    std::string bits(num_qubits, '0');
    for (std::uint32_t q = 0; q < num_qubits; ++q)
        if ((index >> q) & 1)
            bits[num_qubits - 1 - q] = '1';
    return bits;
}

std::uint64_t index_of_bitstring(std::string_view bits) {
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const char ch = bits[i];
        if (ch != '0' && ch != '1')
            raise(ErrorCode::ParseError,
                  "bitstring may contain only 0 and 1: '" + std::string(bits) + "'");
        if (ch == '1')
            index |= std::uint64_t{1} << (bits.size() - 1 - i);
    }
    return index;
}

} // namespace qport

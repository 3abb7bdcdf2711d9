#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qport {

enum class GateKind { RY, RZ, CX, MCRY };

std::string_view gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(std::string_view name);

/// One gate record. Controls are empty for RY/RZ, exactly one qubit for CX
/// and one or more for MCRY (a uniformly controlled RY). Angles hold one
/// entry for RY/RZ, none for CX and 2^|controls| for MCRY, indexed by the
/// classical control value read with the lowest-numbered control qubit as
/// the least significant bit.
struct GateOp {
    GateKind kind = GateKind::RY;
    std::uint32_t target = 0;
    std::vector<std::uint32_t> controls;
    std::vector<double> angles;

    bool operator==(const GateOp&) const = default;
};

/// Ordered gate sequence over num_qubits qubits. Gates are only appended;
/// the builder methods validate each op on insertion, but ops is left public
/// so malformed circuits can be assembled for validate() tests.
struct Circuit {
    std::uint32_t num_qubits = 1;
    std::vector<GateOp> ops;
    bool measured = false;

    explicit Circuit(std::uint32_t nq = 1) : num_qubits(nq) {}

    Circuit& ry(std::uint32_t target, double angle);
    Circuit& rz(std::uint32_t target, double angle);
    Circuit& cx(std::uint32_t control, std::uint32_t target);
    Circuit& mcry(std::vector<std::uint32_t> controls, std::uint32_t target,
                  std::vector<double> angles);

    /// Validates and appends.
    Circuit& append(GateOp op);

    bool operator==(const Circuit&) const = default;
};

/// Checks a single op against a qubit budget. Throws Error with
/// IndexOutOfRange, DuplicateControl or ArityMismatch.
void validate(const GateOp& op, std::uint32_t num_qubits);

/// Checks every op in the circuit.
void validate(const Circuit& circuit);

/// Rewrites each MCRY with k controls into the equivalent sequence of 2^k RY
/// and 2^k CX gates (multiplexed-rotation decomposition); RY/RZ/CX pass
/// through untouched. Idempotent; the simulated action matches the native
/// multiplexor within 1e-12.
Circuit lower(const Circuit& circuit);

/// Exact tally per gate kind; all four kinds are present as keys.
std::map<GateKind, std::uint64_t> gate_counts(const Circuit& circuit);

/// Text serialization: a header (qubit count, measured flag) followed by one
/// record per gate. Angles are written with 17 significant digits so a
/// round-trip is bit-exact.
std::string to_text(const Circuit& circuit);
Circuit circuit_from_text(std::string_view text);

} // namespace qport

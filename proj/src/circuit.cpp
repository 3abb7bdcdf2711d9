#include "qport/circuit.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "qport/errors.hpp"
#include "qport/textio.hpp"

namespace qport {

std::string_view gate_kind_name(GateKind kind) {
    switch (kind) {
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CX: return "CX";
    case GateKind::MCRY: return "MCRY";
    }
    return "?";
}

GateKind gate_kind_from_name(std::string_view name) {
    if (name == "RY") return GateKind::RY;
    if (name == "RZ") return GateKind::RZ;
    if (name == "CX") return GateKind::CX;
    if (name == "MCRY") return GateKind::MCRY;
    raise(ErrorCode::ParseError, "unknown gate kind '" + std::string(name) + "'");
}

void validate(const GateOp& op, std::uint32_t num_qubits) {
    if (op.target >= num_qubits)
        raise(ErrorCode::IndexOutOfRange,
              "target qubit " + std::to_string(op.target) + " out of range for " +
                  std::to_string(num_qubits) + " qubits");
    for (std::uint32_t c : op.controls) {
        if (c >= num_qubits)
            raise(ErrorCode::IndexOutOfRange,
                  "control qubit " + std::to_string(c) + " out of range for " +
                      std::to_string(num_qubits) + " qubits");
        if (c == op.target)
            raise(ErrorCode::DuplicateControl,
                  "control qubit " + std::to_string(c) + " equals target");
    }
    auto sorted = op.controls;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        raise(ErrorCode::DuplicateControl, "repeated control qubit");

    const auto arity_error = [&](std::size_t expected_controls, std::size_t expected_angles) {
        raise(ErrorCode::ArityMismatch,
              std::string(gate_kind_name(op.kind)) + " expects " +
                  std::to_string(expected_controls) + " controls and " +
                  std::to_string(expected_angles) + " angles, got " +
                  std::to_string(op.controls.size()) + "/" + std::to_string(op.angles.size()));
    };
    switch (op.kind) {
    case GateKind::RY:
    case GateKind::RZ:
        if (!op.controls.empty() || op.angles.size() != 1) arity_error(0, 1);
        break;
    case GateKind::CX:
        if (op.controls.size() != 1 || !op.angles.empty()) arity_error(1, 0);
        break;
    case GateKind::MCRY: {
        if (op.controls.empty()) arity_error(1, 2);
        const std::size_t expected = std::size_t{1} << op.controls.size();
        if (op.angles.size() != expected) arity_error(op.controls.size(), expected);
        break;
    }
    }
}

void validate(const Circuit& circuit) {
    if (circuit.num_qubits == 0)
        raise(ErrorCode::IndexOutOfRange, "circuit must have at least one qubit");
    for (const GateOp& op : circuit.ops)
        validate(op, circuit.num_qubits);
}

Circuit& Circuit::append(GateOp op) {
    validate(op, num_qubits);
    ops.push_back(std::move(op));
    return *this;
}

Circuit& Circuit::ry(std::uint32_t target, double angle) {
    return append({GateKind::RY, target, {}, {angle}});
}

Circuit& Circuit::rz(std::uint32_t target, double angle) {
    return append({GateKind::RZ, target, {}, {angle}});
}

Circuit& Circuit::cx(std::uint32_t control, std::uint32_t target) {
    return append({GateKind::CX, target, {control}, {}});
}

Circuit& Circuit::mcry(std::vector<std::uint32_t> controls, std::uint32_t target,
                       std::vector<double> angles) {
    return append({GateKind::MCRY, target, std::move(controls), std::move(angles)});
}

namespace {

// Multiplexed-RY decomposition. The rotation angles seen by each control
// value v are sums of the emitted angles with signs (-1)^{b(v).g(j)}
// (g = binary reflected Gray code), so the emitted angles come from the
// Walsh-Hadamard transform of the input list, permuted by Gray code and
// scaled by 2^-k. Between consecutive RYs the CX control is the qubit whose
// Gray-code bit flips; the final CX uses the highest control to close the
// cycle.
void lower_mcry(const GateOp& op, Circuit& out) {
    std::vector<std::uint32_t> controls = op.controls;
    std::sort(controls.begin(), controls.end()); // angle index uses qubit-number order
    const std::uint32_t k = static_cast<std::uint32_t>(controls.size());
    const std::size_t m = std::size_t{1} << k;

    std::vector<double> wht = op.angles;
    for (std::size_t len = 1; len < m; len <<= 1) {
        for (std::size_t i = 0; i < m; i += 2 * len) {
            for (std::size_t j = i; j < i + len; ++j) {
                const double a = wht[j];
                const double b = wht[j + len];
                wht[j] = a + b;
                wht[j + len] = a - b;
            }
        }
    }
    const double scale = 1.0 / static_cast<double>(m);

    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t gray = j ^ (j >> 1);
        out.ry(op.target, wht[gray] * scale);
        const std::uint32_t flip =
            (j + 1 < m) ? static_cast<std::uint32_t>(std::countr_zero(j + 1)) : k - 1;
        out.cx(controls[flip], op.target);
    }
}

} // namespace

Circuit lower(const Circuit& circuit) {
    validate(circuit);
    Circuit out(circuit.num_qubits);
    out.measured = circuit.measured;
    for (const GateOp& op : circuit.ops) {
        if (op.kind == GateKind::MCRY)
            lower_mcry(op, out);
        else
            out.append(op);
    }
    return out;
}

std::map<GateKind, std::uint64_t> gate_counts(const Circuit& circuit) {
    validate(circuit);
    std::map<GateKind, std::uint64_t> counts{
        {GateKind::RY, 0}, {GateKind::RZ, 0}, {GateKind::CX, 0}, {GateKind::MCRY, 0}};
    for (const GateOp& op : circuit.ops)
        ++counts[op.kind];
    return counts;
}

std::string to_text(const Circuit& circuit) {
    std::ostringstream out;
    out << "qport-circuit v1\n";
    out << "qubits " << circuit.num_qubits << "\n";
    out << "measured " << (circuit.measured ? 1 : 0) << "\n";
    for (const GateOp& op : circuit.ops) {
        out << gate_kind_name(op.kind) << ' ' << op.target << ' ';
        if (op.controls.empty()) {
            out << '-';
        } else {
            for (std::size_t i = 0; i < op.controls.size(); ++i)
                out << (i ? "," : "") << op.controls[i];
        }
        for (double a : op.angles)
            out << ' ' << format_g17(a);
        out << '\n';
    }
    return out.str();
}

Circuit circuit_from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    // next content line; '#' metadata and blank lines are skipped everywhere
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            const std::string_view t = trim(line);
            if (t.empty() || t.front() == '#')
                continue;
            line = std::string(t);
            return true;
        }
        return false;
    };

    if (!next_line() || line != "qport-circuit v1")
        raise(ErrorCode::ParseError, "circuit file: missing 'qport-circuit v1' header");

    auto header_field = [&](std::string_view key) -> std::string {
        if (!next_line())
            raise(ErrorCode::ParseError, "circuit file: truncated header");
        auto parts = split(line, ' ');
        if (parts.size() != 2 || parts[0] != key)
            raise(ErrorCode::ParseError,
                  "circuit file: expected '" + std::string(key) + " <value>', got '" + line + "'");
        return parts[1];
    };

    Circuit circuit(static_cast<std::uint32_t>(parse_u64(header_field("qubits"), "circuit qubits")));
    circuit.measured = parse_u64(header_field("measured"), "circuit measured") != 0;

    while (next_line()) {
        const auto fields = split(line, ' ');
        if (fields.size() < 3)
            raise(ErrorCode::ParseError,
                  "circuit file line " + std::to_string(lineno) + ": expected kind target controls");
        GateOp op;
        op.kind = gate_kind_from_name(fields[0]);
        op.target = static_cast<std::uint32_t>(parse_u64(fields[1], "gate target"));
        if (fields[2] != "-")
            for (const auto& c : split(fields[2], ','))
                op.controls.push_back(static_cast<std::uint32_t>(parse_u64(c, "gate control")));
        for (std::size_t i = 3; i < fields.size(); ++i)
            op.angles.push_back(parse_double(fields[i], "gate angle"));
        circuit.append(std::move(op));
    }
    return circuit;
}

} // namespace qport

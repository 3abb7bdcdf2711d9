#include <cmath>
#include <functional>
#include <random>

#include <doctest.h>

#include "qport/circuit.hpp"
#include "qport/errors.hpp"
#include "qport/statevec.hpp"

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

} // namespace

TEST_CASE("builder validates targets and controls") {
    Circuit c(3);
    check_error(ErrorCode::IndexOutOfRange, [&] { c.ry(3, 0.1); });
    check_error(ErrorCode::IndexOutOfRange, [&] { c.rz(7, 0.1); });
    check_error(ErrorCode::IndexOutOfRange, [&] { c.cx(0, 5); });
    check_error(ErrorCode::IndexOutOfRange, [&] { c.cx(5, 0); });
    check_error(ErrorCode::DuplicateControl, [&] { c.cx(1, 1); });
    check_error(ErrorCode::DuplicateControl, [&] { c.mcry({0, 2}, 2, {0, 0, 0, 0}); });
    check_error(ErrorCode::DuplicateControl,
                [&] { c.mcry({0, 0}, 2, {0, 0, 0, 0}); });
    check_error(ErrorCode::ArityMismatch, [&] { c.mcry({0, 1}, 2, {0, 0, 0}); });
    check_error(ErrorCode::ArityMismatch, [&] { c.mcry({}, 2, {0}); });
    CHECK(c.ops.empty());

    c.ry(0, 0.3).rz(1, -0.2).cx(0, 2).mcry({0, 1}, 2, {0.1, 0.2, 0.3, 0.4});
    CHECK(c.ops.size() == 4);
}

TEST_CASE("validate rejects hand-assembled malformed ops") {
    Circuit c(2);
    GateOp op;
    op.kind = GateKind::RY;
    op.target = 0;
    op.angles = {0.1, 0.2};
    c.ops.push_back(op);
    check_error(ErrorCode::ArityMismatch, [&] { validate(c); });

    c.ops.clear();
    op = GateOp{};
    op.kind = GateKind::CX;
    op.target = 1;
    op.controls = {0};
    op.angles = {0.5};
    c.ops.push_back(op);
    check_error(ErrorCode::ArityMismatch, [&] { validate(c); });

    c.ops.clear();
    op = GateOp{};
    op.kind = GateKind::RZ;
    op.target = 0;
    op.controls = {1};
    op.angles = {0.5};
    c.ops.push_back(op);
    check_error(ErrorCode::ArityMismatch, [&] { validate(c); });
}

TEST_CASE("single-control multiplexor lowers to the textbook sequence") {
    const double a0 = 0.7, a1 = -0.4;
    Circuit c(2);
    c.mcry({0}, 1, {a0, a1});

    const Circuit low = lower(c);
    REQUIRE(low.ops.size() == 4);
    CHECK(low.ops[0].kind == GateKind::RY);
    CHECK(low.ops[0].target == 1);
    CHECK(low.ops[0].angles[0] == (a0 + a1) * 0.5);
    CHECK(low.ops[1].kind == GateKind::CX);
    CHECK(low.ops[1].controls[0] == 0);
    CHECK(low.ops[2].kind == GateKind::RY);
    CHECK(low.ops[2].angles[0] == (a0 - a1) * 0.5);
    CHECK(low.ops[3].kind == GateKind::CX);
    CHECK(low.ops[3].controls[0] == 0);
}

TEST_CASE("lowering preserves the simulated state") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(-3.0, 3.0);

    for (std::uint32_t k = 1; k <= 3; ++k) {
        const std::uint32_t nq = k + 2;
        Circuit c(nq);
        for (std::uint32_t q = 0; q < nq; ++q)
            c.ry(q, ang(rng));
        std::vector<std::uint32_t> controls;
        for (std::uint32_t b = 0; b < k; ++b)
            controls.push_back(b + 1);
        std::vector<double> angles(std::size_t{1} << k);
        for (double& a : angles)
            a = ang(rng);
        c.mcry(controls, 0, angles);

        const StateVector native = simulate(c);
        const StateVector lowered = simulate(lower(c));
        REQUIRE(native.amplitudes.size() == lowered.amplitudes.size());
        for (std::size_t i = 0; i < native.amplitudes.size(); ++i)
            CHECK(std::abs(native.amplitudes[i] - lowered.amplitudes[i]) < 1e-12);
    }
}

TEST_CASE("multiplexor control order is by qubit number, not list order") {
    const std::vector<double> angles{0.3, -0.8, 1.1, 0.25};
    Circuit ca(3);
    ca.ry(1, 1.0).ry(2, -0.7).mcry({1, 2}, 0, angles);
    Circuit cb(3);
    cb.ry(1, 1.0).ry(2, -0.7).mcry({2, 1}, 0, angles);
    const StateVector sa = simulate(ca);
    const StateVector sb = simulate(cb);
    for (std::size_t i = 0; i < sa.amplitudes.size(); ++i)
        CHECK(sa.amplitudes[i] == sb.amplitudes[i]);

    CHECK(lower(ca) == lower(cb));
}

TEST_CASE("lower is idempotent and passes RZ through") {
    Circuit c(3);
    c.ry(0, 0.2).rz(2, -0.9).mcry({0, 2}, 1, {0.1, 0.2, 0.3, 0.4}).cx(2, 0);
    const Circuit once = lower(c);
    CHECK(lower(once) == once);
    const auto counts = gate_counts(once);
    CHECK(counts.at(GateKind::MCRY) == 0);
    CHECK(counts.at(GateKind::RZ) == 1);
    CHECK(counts.at(GateKind::RY) == 1 + 4);
    CHECK(counts.at(GateKind::CX) == 1 + 4);
}

TEST_CASE("gate_counts lists every kind") {
    const Circuit c(1);
    const auto counts = gate_counts(c);
    CHECK(counts.size() == 4);
    CHECK(counts.at(GateKind::RY) == 0);
    CHECK(counts.at(GateKind::RZ) == 0);
    CHECK(counts.at(GateKind::CX) == 0);
    CHECK(counts.at(GateKind::MCRY) == 0);
}

TEST_CASE("text serialization round-trips bit-exactly") {
    Circuit c(4);
    c.ry(0, 0.1234567890123456789)
        .rz(3, -1e-17)
        .cx(2, 1)
        .mcry({0, 3}, 1, {1.0 / 3.0, 2.0 / 3.0, -0.25, 1e300});
    const Circuit back = circuit_from_text(to_text(c));
    CHECK(back == c);

    const Circuit measured = circuit_from_text(to_text([&] {
        Circuit m = c;
        m.measured = true;
        return m;
    }()));
    CHECK(measured.measured);
}

TEST_CASE("text parser flags malformed documents") {
    check_error(ErrorCode::ParseError, [] { circuit_from_text("nonsense"); });
    check_error(ErrorCode::ParseError,
                [] { circuit_from_text("qport-circuit v1\nqubits 2\n"); });
    check_error(ErrorCode::ParseError, [] {
        circuit_from_text("qport-circuit v1\nqubits 2\nmeasured 0\nFOO 0 -\n");
    });
    check_error(ErrorCode::IndexOutOfRange, [] {
        circuit_from_text("qport-circuit v1\nqubits 2\nmeasured 0\nRY 5 - 0.25\n");
    });
    const Circuit ok = circuit_from_text(
        "# comment\nqport-circuit v1\n# another\nqubits 2\nmeasured 1\nRY 0 - 0.5\n");
    CHECK(ok.num_qubits == 2);
    CHECK(ok.measured);
    CHECK(ok.ops.size() == 1);
}

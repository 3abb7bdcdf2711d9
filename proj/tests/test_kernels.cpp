#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include <doctest.h>

#include "qport/errors.hpp"
#include "qport/kernels.hpp"

using namespace qport;
using kernels::Amp;

namespace {

std::vector<Amp> random_state(std::size_t size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Amp> amps(size);
    for (Amp& a : amps)
        a = {dist(rng), dist(rng)};
    return amps;
}

bool bitwise_equal(const std::vector<Amp>& a, const std::vector<Amp>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(Amp)) == 0;
}

} // namespace

TEST_CASE("scalar RY acts on the right index pairs") {
    const auto& k = kernels::scalar_table();
    // RY(pi) sends a0 -> -a1, a1 -> a0 up to rounding of cos(pi/2)
    std::vector<Amp> amps{{1.0, 0.0}, {0.0, 0.0}, {0.5, -0.5}, {0.25, 0.0}};
    k.apply_ry(amps.data(), amps.size(), 1, 0.0, 1.0);
    CHECK(amps[0] == Amp{0.0, 0.0});
    CHECK(amps[1] == Amp{1.0, 0.0});
    CHECK(amps[2] == Amp{-0.25, 0.0});
    CHECK(amps[3] == Amp{0.5, -0.5});
}

TEST_CASE("scalar RZ applies conjugate phases per target bit") {
    const auto& k = kernels::scalar_table();
    std::vector<Amp> amps{{1.0, 0.0}, {0.0, 1.0}};
    const double cr = std::cos(0.3), ci = std::sin(0.3);
    k.apply_rz(amps.data(), amps.size(), 1, cr, ci);
    CHECK(amps[0].real() == cr);
    CHECK(amps[0].imag() == -ci);
    CHECK(amps[1].real() == -ci);
    CHECK(amps[1].imag() == cr);
}

TEST_CASE("scalar CX swaps target pairs where the control is set") {
    const auto& k = kernels::scalar_table();
    std::vector<Amp> amps(8);
    for (std::size_t i = 0; i < 8; ++i)
        amps[i] = {double(i), 0.0};
    k.apply_cx(amps.data(), amps.size(), 1, 4); // control q0, target q2
    for (std::size_t i = 0; i < 8; ++i) {
        std::size_t expect = i;
        if (i & 1)
            expect = i ^ 4;
        CHECK(amps[i].real() == double(expect));
    }
}

TEST_CASE("abs2 matches manual squares") {
    const auto& k = kernels::scalar_table();
    const auto amps = random_state(37, 5);
    std::vector<double> out(amps.size());
    k.abs2(amps.data(), out.data(), out.size());
    for (std::size_t i = 0; i < amps.size(); ++i)
        CHECK(out[i] == amps[i].real() * amps[i].real() +
                            amps[i].imag() * amps[i].imag());
}

TEST_CASE("avx2 kernels are bitwise identical to scalar") {
    if (!kernels::avx2_available()) {
        MESSAGE("avx2 not available; skipping equivalence sweep");
        return;
    }
    const auto& scalar = kernels::scalar_table();
    const auto* avx2 = kernels::avx2_table();
    REQUIRE(avx2 != nullptr);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ang(-3.2, 3.2);

    for (std::uint32_t nq = 1; nq <= 10; ++nq) {
        const std::size_t size = std::size_t{1} << nq;
        for (std::uint32_t t = 0; t < nq; ++t) {
            const std::uint64_t tmask = std::uint64_t{1} << t;
            const double theta = ang(rng);
            const double c = std::cos(theta / 2), s = std::sin(theta / 2);

            auto a = random_state(size, nq * 131 + t);
            auto b = a;
            scalar.apply_ry(a.data(), size, tmask, c, s);
            avx2->apply_ry(b.data(), size, tmask, c, s);
            CHECK(bitwise_equal(a, b));

            a = random_state(size, nq * 131 + t + 7000);
            b = a;
            scalar.apply_rz(a.data(), size, tmask, c, s);
            avx2->apply_rz(b.data(), size, tmask, c, s);
            CHECK(bitwise_equal(a, b));

            for (std::uint32_t ctl = 0; ctl < nq; ++ctl) {
                if (ctl == t)
                    continue;
                const std::uint64_t cmask = std::uint64_t{1} << ctl;
                a = random_state(size, nq * 977 + t * 31 + ctl);
                b = a;
                scalar.apply_cx(a.data(), size, cmask, tmask);
                avx2->apply_cx(b.data(), size, cmask, tmask);
                CHECK(bitwise_equal(a, b));
            }
        }

        const auto amps = random_state(size, nq + 40000);
        std::vector<double> pa(size), pb(size);
        scalar.abs2(amps.data(), pa.data(), size);
        avx2->abs2(amps.data(), pb.data(), size);
        CHECK(std::memcmp(pa.data(), pb.data(), size * sizeof(double)) == 0);
    }
}

TEST_CASE("abs2 handles sizes that are not multiples of the vector width") {
    if (!kernels::avx2_available())
        return;
    const auto* avx2 = kernels::avx2_table();
    for (std::size_t size : {1, 2, 3, 5, 6, 7, 9, 1023}) {
        const auto amps = random_state(size, size);
        std::vector<double> pa(size), pb(size);
        kernels::scalar_table().abs2(amps.data(), pa.data(), size);
        avx2->abs2(amps.data(), pb.data(), size);
        CHECK(std::memcmp(pa.data(), pb.data(), size * sizeof(double)) == 0);
    }
}

TEST_CASE("backend selection") {
    using kernels::Backend;
    CHECK(kernels::backend_from_name("auto") == Backend::Auto);
    CHECK(kernels::backend_from_name("scalar") == Backend::Scalar);
    CHECK(kernels::backend_from_name("avx2") == Backend::Avx2);
    CHECK_THROWS_AS((void)kernels::backend_from_name("sse9"), Error);

    CHECK(kernels::backend_name(Backend::Scalar) == "scalar");
    CHECK(kernels::backend_name(Backend::Avx2) == "avx2");
    CHECK(kernels::backend_name(Backend::Auto) == "auto");

    const Backend before = kernels::current();
    CHECK(kernels::select(Backend::Scalar) == Backend::Scalar);
    CHECK(kernels::current() == Backend::Scalar);
    CHECK(std::string(kernels::active().name) == "scalar");

    if (kernels::avx2_available()) {
        CHECK(kernels::select(Backend::Avx2) == Backend::Avx2);
        CHECK(std::string(kernels::active().name) == "avx2");
    } else {
        try {
            kernels::select(Backend::Avx2);
            FAIL("selecting avx2 without support must throw");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnsupportedKernel);
        }
    }
    kernels::select(before == Backend::Scalar ? Backend::Scalar : Backend::Auto);
}

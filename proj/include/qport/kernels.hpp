#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

// Statevector inner loops: scalar reference kernels plus AVX2 variants
// selected at runtime. Both paths perform the identical per-element
// multiply/add sequence (no FMA contraction), so picking a different backend
// never changes a single bit of the result; test_kernels checks this.

namespace qport::kernels {

using Amp = std::complex<double>;

// a0' = c*a0 - s*a1, a1' = s*a0 + c*a1 over index pairs split by target_mask.
using ApplyRyFn = void (*)(Amp* amps, std::size_t size, std::uint64_t target_mask,
                           double c, double s);
// Multiplies amplitudes with target bit 0 by (cr, -ci) and bit 1 by (cr, ci).
using ApplyRzFn = void (*)(Amp* amps, std::size_t size, std::uint64_t target_mask,
                           double cr, double ci);
// Swaps the target-bit pair wherever the control bit is set.
using ApplyCxFn = void (*)(Amp* amps, std::size_t size, std::uint64_t control_mask,
                           std::uint64_t target_mask);
// out[i] = |amps[i]|^2
using Abs2Fn = void (*)(const Amp* amps, double* out, std::size_t size);

struct KernelTable {
    ApplyRyFn apply_ry;
    ApplyRzFn apply_rz;
    ApplyCxFn apply_cx;
    Abs2Fn abs2;
    const char* name;
};

enum class Backend { Auto, Scalar, Avx2 };

const KernelTable& scalar_table();
const KernelTable* avx2_table(); // nullptr when not compiled in
bool avx2_available();           // compiled in AND supported by this CPU

/// Table currently in use; defaults to the best available backend.
const KernelTable& active();

/// Forces a backend. Auto re-resolves to the best available. Throws
/// Error(UnsupportedKernel) if the request cannot be honored.
Backend select(Backend request);
Backend current();

Backend backend_from_name(std::string_view name); // auto|scalar|avx2
std::string_view backend_name(Backend backend);

} // namespace qport::kernels

#include "qport/kernels.hpp"

// Reference kernels. Every per-element operation is written as the exact
// multiply/add sequence the AVX2 variants execute, so the two backends agree
// bit for bit (both translation units are compiled with -ffp-contract=off).

namespace qport::kernels {

void apply_ry_scalar(Amp* amps, std::size_t size, std::uint64_t target_mask,
                     double c, double s) {
    double* d = reinterpret_cast<double*>(amps);
    const double ns = -s;
    for (std::uint64_t base = 0; base < size; base += 2 * target_mask) {
        for (std::uint64_t off = 0; off < target_mask; ++off) {
            const std::uint64_t i0 = 2 * (base + off);
            const std::uint64_t i1 = i0 + 2 * target_mask;
            const double re0 = d[i0], im0 = d[i0 + 1];
            const double re1 = d[i1], im1 = d[i1 + 1];
            d[i0] = re0 * c + re1 * ns;
            d[i0 + 1] = im0 * c + im1 * ns;
            d[i1] = re1 * c + re0 * s;
            d[i1 + 1] = im1 * c + im0 * s;
        }
    }
}

void apply_rz_scalar(Amp* amps, std::size_t size, std::uint64_t target_mask,
                     double cr, double ci) {
    double* d = reinterpret_cast<double*>(amps);
    for (std::uint64_t base = 0; base < size; base += 2 * target_mask) {
        for (std::uint64_t off = 0; off < target_mask; ++off) {
            const std::uint64_t i0 = 2 * (base + off);
            const std::uint64_t i1 = i0 + 2 * target_mask;
            // target bit 0: phase (cr, -ci); target bit 1: phase (cr, ci)
            const double re0 = d[i0], im0 = d[i0 + 1];
            d[i0] = re0 * cr - im0 * -ci;
            d[i0 + 1] = im0 * cr + re0 * -ci;
            const double re1 = d[i1], im1 = d[i1 + 1];
            d[i1] = re1 * cr - im1 * ci;
            d[i1 + 1] = im1 * cr + re1 * ci;
        }
    }
}

void apply_cx_scalar(Amp* amps, std::size_t size, std::uint64_t control_mask,
                     std::uint64_t target_mask) {
    const std::uint64_t min_mask = control_mask < target_mask ? control_mask : target_mask;
    const std::uint64_t max_mask = control_mask < target_mask ? target_mask : control_mask;
    for (std::uint64_t hi = 0; hi < size; hi += 2 * max_mask) {
        for (std::uint64_t mid = 0; mid < max_mask; mid += 2 * min_mask) {
            const std::uint64_t start = hi + mid + control_mask;
            for (std::uint64_t lo = 0; lo < min_mask; ++lo) {
                const Amp tmp = amps[start + lo];
                amps[start + lo] = amps[start + lo + target_mask];
                amps[start + lo + target_mask] = tmp;
            }
        }
    }
}

void abs2_scalar(const Amp* amps, double* out, std::size_t size) {
    const double* d = reinterpret_cast<const double*>(amps);
    for (std::size_t i = 0; i < size; ++i) {
        const double re = d[2 * i], im = d[2 * i + 1];
        out[i] = re * re + im * im;
    }
}

const KernelTable& scalar_table() {
    static const KernelTable table{apply_ry_scalar, apply_rz_scalar, apply_cx_scalar,
                                   abs2_scalar, "scalar"};
    return table;
}

} // namespace qport::kernels

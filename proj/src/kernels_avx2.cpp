#ifdef QPORT_HAVE_AVX2

#include <immintrin.h>

#include "qport/kernels.hpp"

// AVX2 variants of the statevector kernels. Two complex doubles per 256-bit
// lane, unaligned loads, no FMA: per element these execute the same
// multiply/add sequence as the scalar reference, so results are bitwise
// identical to it.

namespace qport::kernels {

namespace {

// Pairs are adjacent when the target is qubit 0; one vector holds a whole
// (a0, a1) pair as (re0, im0, re1, im1).
void apply_ry_avx2_t0(double* d, std::size_t size, double c, double s) {
    const __m256d cv = _mm256_set1_pd(c);
    const __m256d sv = _mm256_set_pd(s, s, -s, -s); // lanes 0..1 pair with a1, 2..3 with a0
    for (std::size_t i = 0; i < 2 * size; i += 4) {
        const __m256d v = _mm256_loadu_pd(d + i);
        const __m256d w = _mm256_permute4x64_pd(v, _MM_SHUFFLE(1, 0, 3, 2)); // swap halves
        const __m256d r = _mm256_add_pd(_mm256_mul_pd(v, cv), _mm256_mul_pd(w, sv));
        _mm256_storeu_pd(d + i, r);
    }
}

} // namespace

void apply_ry_avx2(Amp* amps, std::size_t size, std::uint64_t target_mask,
                   double c, double s) {
    double* d = reinterpret_cast<double*>(amps);
    if (target_mask == 1) {
        apply_ry_avx2_t0(d, size, c, s);
        return;
    }
    const __m256d cv = _mm256_set1_pd(c);
    const __m256d sv = _mm256_set1_pd(s);
    const __m256d nsv = _mm256_set1_pd(-s);
    for (std::uint64_t base = 0; base < size; base += 2 * target_mask) {
        for (std::uint64_t off = 0; off < target_mask; off += 2) {
            double* p0 = d + 2 * (base + off);
            double* p1 = p0 + 2 * target_mask;
            const __m256d v0 = _mm256_loadu_pd(p0);
            const __m256d v1 = _mm256_loadu_pd(p1);
            const __m256d n0 = _mm256_add_pd(_mm256_mul_pd(v0, cv), _mm256_mul_pd(v1, nsv));
            const __m256d n1 = _mm256_add_pd(_mm256_mul_pd(v1, cv), _mm256_mul_pd(v0, sv));
            _mm256_storeu_pd(p0, n0);
            _mm256_storeu_pd(p1, n1);
        }
    }
}

namespace {

// result_even = re*pr - im*pi, result_odd = im*pr + re*pi via addsub.
inline __m256d complex_scale(__m256d v, __m256d pr, __m256d pi) {
    const __m256d t1 = _mm256_mul_pd(v, pr);
    const __m256d swapped = _mm256_permute_pd(v, 0x5); // (im, re) per complex
    const __m256d t2 = _mm256_mul_pd(swapped, pi);
    return _mm256_addsub_pd(t1, t2);
}

} // namespace

void apply_rz_avx2(Amp* amps, std::size_t size, std::uint64_t target_mask,
                   double cr, double ci) {
    double* d = reinterpret_cast<double*>(amps);
    const __m256d pr = _mm256_set1_pd(cr);
    const __m256d pi0 = _mm256_set1_pd(-ci);
    const __m256d pi1 = _mm256_set1_pd(ci);
    if (target_mask == 1) {
        // (a0, a1) in one vector: lanes 0..1 get phase (cr,-ci), 2..3 (cr,ci)
        const __m256d pi01 = _mm256_set_pd(ci, ci, -ci, -ci);
        for (std::size_t i = 0; i < 2 * size; i += 4) {
            const __m256d v = _mm256_loadu_pd(d + i);
            _mm256_storeu_pd(d + i, complex_scale(v, pr, pi01));
        }
        return;
    }
    for (std::uint64_t base = 0; base < size; base += 2 * target_mask) {
        for (std::uint64_t off = 0; off < target_mask; off += 2) {
            double* p0 = d + 2 * (base + off);
            double* p1 = p0 + 2 * target_mask;
            _mm256_storeu_pd(p0, complex_scale(_mm256_loadu_pd(p0), pr, pi0));
            _mm256_storeu_pd(p1, complex_scale(_mm256_loadu_pd(p1), pr, pi1));
        }
    }
}

void apply_cx_avx2(Amp* amps, std::size_t size, std::uint64_t control_mask,
                   std::uint64_t target_mask) {
    const std::uint64_t min_mask = control_mask < target_mask ? control_mask : target_mask;
    if (min_mask < 2) { // interleaved pairs; plain element swaps
        scalar_table().apply_cx(amps, size, control_mask, target_mask);
        return;
    }
    const std::uint64_t max_mask = control_mask < target_mask ? target_mask : control_mask;
    double* d = reinterpret_cast<double*>(amps);
    for (std::uint64_t hi = 0; hi < size; hi += 2 * max_mask) {
        for (std::uint64_t mid = 0; mid < max_mask; mid += 2 * min_mask) {
            const std::uint64_t start = hi + mid + control_mask;
            for (std::uint64_t lo = 0; lo < min_mask; lo += 2) {
                double* p0 = d + 2 * (start + lo);
                double* p1 = p0 + 2 * target_mask;
                const __m256d v0 = _mm256_loadu_pd(p0);
                const __m256d v1 = _mm256_loadu_pd(p1);
                _mm256_storeu_pd(p0, v1);
                _mm256_storeu_pd(p1, v0);
            }
        }
    }
}

void abs2_avx2(const Amp* amps, double* out, std::size_t size) {
    const double* d = reinterpret_cast<const double*>(amps);
    std::size_t i = 0;
    for (; i + 4 <= size; i += 4) {
        const __m256d v1 = _mm256_loadu_pd(d + 2 * i);     // c0, c1
        const __m256d v2 = _mm256_loadu_pd(d + 2 * i + 4); // c2, c3
        const __m256d s1 = _mm256_mul_pd(v1, v1);
        const __m256d s2 = _mm256_mul_pd(v2, v2);
        // hadd yields (|c0|^2, |c2|^2, |c1|^2, |c3|^2); permute restores order
        const __m256d h = _mm256_hadd_pd(s1, s2);
        _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, _MM_SHUFFLE(3, 1, 2, 0)));
    }
    for (; i < size; ++i) {
        const double re = d[2 * i], im = d[2 * i + 1];
        out[i] = re * re + im * im;
    }
}

const KernelTable* avx2_table() {
    static const KernelTable table{apply_ry_avx2, apply_rz_avx2, apply_cx_avx2,
                                   abs2_avx2, "avx2"};
    return &table;
}

} // namespace qport::kernels

#endif // QPORT_HAVE_AVX2

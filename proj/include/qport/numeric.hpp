#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace qport {

/// Pairwise (tree) summation. Fixed reduction order, independent of any
/// parallelism or vector width, so normalizations are reproducible bit for
/// bit across runs and build configurations.
inline double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n <= 8) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed for execution `index` derived from `base`: the (index+1)-th output of
/// the splitmix64 stream whose state starts at `base`. Stable across
/// platforms; documented so external tooling can reproduce child streams.
inline std::uint64_t child_seed(std::uint64_t base, std::uint64_t index) {
    return mix64(base + (index + 1) * 0x9E3779B97F4A7C15ull);
}

/// Map a raw 64-bit draw to [0, 1) using the top 53 bits. Pinned here rather
/// than via std::uniform_real_distribution, whose mapping is
/// implementation-defined.
inline double uniform_unit(std::uint64_t raw) {
    return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

} // namespace qport

#pragma once

// Data-parallel inner loops used by the sampling-based visibility scoring.
// Every kernel has a scalar reference implementation and an AVX2 variant;
// the variant is chosen once at runtime from CPUID. Both variants produce
// bit-identical results.

#include <cstddef>
#include <cstdint>
#include <span>

#include "kwatch/geometry.hpp"

namespace kwatch::kernels {

enum class Isa { kScalar, kAvx2 };

/// Best instruction set supported by this CPU and build.
Isa detected_isa();
/// Instruction set currently used by the dispatching entry points.
Isa active_isa();
/// Forces an instruction set (falls back to scalar when unsupported).
void set_active_isa(Isa isa);
const char* isa_name(Isa isa);

inline std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

/// Sets bit i of `out` iff (xs[i], ys[i]) lies inside `ring` under the
/// crossing-number rule. `out` must hold words_for(xs.size()) words; bits
/// past the end are cleared.
void points_in_ring(std::span<const double> xs, std::span<const double> ys,
                    std::span<const Point> ring, std::span<std::uint64_t> out);

/// popcount(a | b)
std::size_t union_popcount(std::span<const std::uint64_t> a,
                           std::span<const std::uint64_t> b);
std::size_t popcount(std::span<const std::uint64_t> a);
/// dst |= src
void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);

namespace scalar {
void points_in_ring(std::span<const double> xs, std::span<const double> ys,
                    std::span<const Point> ring, std::span<std::uint64_t> out);
std::size_t union_popcount(std::span<const std::uint64_t> a,
                           std::span<const std::uint64_t> b);
void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
}  // namespace scalar

namespace avx2 {
bool compiled();
void points_in_ring(std::span<const double> xs, std::span<const double> ys,
                    std::span<const Point> ring, std::span<std::uint64_t> out);
std::size_t union_popcount(std::span<const std::uint64_t> a,
                           std::span<const std::uint64_t> b);
void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
}  // namespace avx2

}  // namespace kwatch::kernels

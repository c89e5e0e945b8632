#include <atomic>
#include <bit>

#include "kwatch/kernels.hpp"

namespace kwatch::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

}  // namespace

Isa detected_isa() {
  return (avx2::compiled() && cpu_has_avx2()) ? Isa::kAvx2 : Isa::kScalar;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::kAvx2 && detected_isa() != Isa::kAvx2) isa = Isa::kScalar;
  active().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

void points_in_ring(std::span<const double> xs, std::span<const double> ys,
                    std::span<const Point> ring, std::span<std::uint64_t> out) {
  if (active_isa() == Isa::kAvx2) {
    avx2::points_in_ring(xs, ys, ring, out);
  } else {
    scalar::points_in_ring(xs, ys, ring, out);
  }
}

std::size_t union_popcount(std::span<const std::uint64_t> a,
                           std::span<const std::uint64_t> b) {
  return active_isa() == Isa::kAvx2 ? avx2::union_popcount(a, b)
                                    : scalar::union_popcount(a, b);
}

std::size_t popcount(std::span<const std::uint64_t> a) { return union_popcount(a, a); }

void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  if (active_isa() == Isa::kAvx2) {
    avx2::or_into(dst, src);
  } else {
    scalar::or_into(dst, src);
  }
}

}  // namespace kwatch::kernels

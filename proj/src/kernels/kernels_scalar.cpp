#include <bit>

#include "kwatch/kernels.hpp"

namespace kwatch::kernels::scalar {

void points_in_ring(std::span<const double> xs, std::span<const double> ys,
                    std::span<const Point> ring, std::span<std::uint64_t> out) {
  const std::size_t count = xs.size();
  for (std::size_t w = 0; w < words_for(count); ++w) out[w] = 0;
  const std::size_t n = ring.size();
  for (std::size_t p = 0; p < count; ++p) {
    const double px = xs[p];
    const double py = ys[p];
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point& a = ring[i];
      const Point& b = ring[j];
      if ((a.y > py) != (b.y > py)) {
        const double x = (b.x - a.x) * (py - a.y) / (b.y - a.y) + a.x;
        if (px < x) inside = !inside;
      }
    }
    if (inside) out[p / 64] |= std::uint64_t{1} << (p % 64);
  }
}

std::size_t union_popcount(std::span<const std::uint64_t> a,
                           std::span<const std::uint64_t> b) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::popcount(a[i] | b[i]);
  return total;
}

void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
}

}  // namespace kwatch::kernels::scalar

// Compiled with -mavx2; only reached after a runtime CPUID check.

#include <bit>

#include "kwatch/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace kwatch::kernels::avx2 {

#if defined(__AVX2__)

bool compiled() { return true; }

void points_in_ring(std::span<const double> xs, std::span<const double> ys,
                    std::span<const Point> ring, std::span<std::uint64_t> out) {
  const std::size_t count = xs.size();
  for (std::size_t w = 0; w < words_for(count); ++w) out[w] = 0;
  const std::size_t n = ring.size();
  std::size_t p = 0;
  for (; p + 4 <= count; p += 4) {
    const __m256d px = _mm256_loadu_pd(xs.data() + p);
    const __m256d py = _mm256_loadu_pd(ys.data() + p);
    __m256d inside = _mm256_setzero_pd();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point& a = ring[i];
      const Point& b = ring[j];
      const __m256d ay = _mm256_set1_pd(a.y);
      const __m256d by = _mm256_set1_pd(b.y);
      const __m256d straddle = _mm256_xor_pd(_mm256_cmp_pd(ay, py, _CMP_GT_OQ),
                                             _mm256_cmp_pd(by, py, _CMP_GT_OQ));
      if (_mm256_movemask_pd(straddle) == 0) continue;
      // Same operation order as the scalar kernel: ((bx-ax)*(py-ay))/(by-ay)+ax.
      const __m256d num = _mm256_mul_pd(_mm256_set1_pd(b.x - a.x), _mm256_sub_pd(py, ay));
      const __m256d x = _mm256_add_pd(_mm256_div_pd(num, _mm256_set1_pd(b.y - a.y)),
                                      _mm256_set1_pd(a.x));
      const __m256d flip = _mm256_and_pd(straddle, _mm256_cmp_pd(px, x, _CMP_LT_OQ));
      inside = _mm256_xor_pd(inside, flip);
    }
    const auto mask = static_cast<std::uint64_t>(_mm256_movemask_pd(inside));
    out[p / 64] |= mask << (p % 64);
  }
  for (; p < count; ++p) {
    const double px = xs[p];
    const double py = ys[p];
    bool in = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point& a = ring[i];
      const Point& b = ring[j];
      if ((a.y > py) != (b.y > py)) {
        const double x = (b.x - a.x) * (py - a.y) / (b.y - a.y) + a.x;
        if (px < x) in = !in;
      }
    }
    if (in) out[p / 64] |= std::uint64_t{1} << (p % 64);
  }
}

namespace {

// Nibble-lookup popcount (Mula); AVX2 has no vector popcount instruction.
inline __m256i popcount_bytes(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
}

}  // namespace

std::size_t union_popcount(std::span<const std::uint64_t> a,
                           std::span<const std::uint64_t> b) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  __m256i acc = _mm256_setzero_si256();
  for (; i + 4 <= n; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    const __m256i bytes = popcount_bytes(_mm256_or_si256(va, vb));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(bytes, _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::size_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) total += std::popcount(a[i] | b[i]);
  return total;
}

void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  const std::size_t n = dst.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    auto* d = reinterpret_cast<__m256i*>(dst.data() + i);
    const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src.data() + i));
    _mm256_storeu_si256(d, _mm256_or_si256(_mm256_loadu_si256(d), s));
  }
  for (; i < n; ++i) dst[i] |= src[i];
}

#else

bool compiled() { return false; }
void points_in_ring(std::span<const double> xs, std::span<const double> ys,
                    std::span<const Point> ring, std::span<std::uint64_t> out) {
  scalar::points_in_ring(xs, ys, ring, out);
}
std::size_t union_popcount(std::span<const std::uint64_t> a,
                           std::span<const std::uint64_t> b) {
  return scalar::union_popcount(a, b);
}
void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  scalar::or_into(dst, src);
}

#endif

}  // namespace kwatch::kernels::avx2

// Compiled with -mavx2; only reached after a runtime CPU check.
#include "netstab/simd/kernels.hpp"

#include <immintrin.h>

namespace netstab::simd::avx2 {

DistanceTotals reduce_distances(std::span<const std::int32_t> dist) noexcept {
  const std::int32_t* p = dist.data();
  const std::size_t n = dist.size();
  const std::size_t blocks = n / 8 * 8;

  const __m256i zero = _mm256_setzero_si256();
  __m256i sum_lo = zero;
  __m256i sum_hi = zero;
  __m256i vmax = zero;
  std::uint64_t count = 0;

  for (std::size_t i = 0; i < blocks; i += 8) {
    const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    const __m256i positive = _mm256_cmpgt_epi32(d, zero);
    const __m256i kept = _mm256_and_si256(d, positive);
    sum_lo = _mm256_add_epi64(sum_lo, _mm256_cvtepi32_epi64(_mm256_castsi256_si128(kept)));
    sum_hi = _mm256_add_epi64(sum_hi, _mm256_cvtepi32_epi64(_mm256_extracti128_si256(kept, 1)));
    vmax = _mm256_max_epi32(vmax, kept);
    count += static_cast<std::uint64_t>(__builtin_popcount(
        static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(positive)))));
  }

  alignas(32) std::uint64_t sums[8];
  _mm256_store_si256(reinterpret_cast<__m256i*>(sums), sum_lo);
  _mm256_store_si256(reinterpret_cast<__m256i*>(sums + 4), sum_hi);
  alignas(32) std::int32_t maxes[8];
  _mm256_store_si256(reinterpret_cast<__m256i*>(maxes), vmax);

  DistanceTotals t;
  for (std::uint64_t s : sums) t.sum += s;
  for (std::int32_t m : maxes) t.max = m > t.max ? m : t.max;
  t.count = count;

  const DistanceTotals tail = scalar::reduce_distances(dist.subspan(blocks));
  t.sum += tail.sum;
  t.count += tail.count;
  if (tail.max > t.max) t.max = tail.max;
  return t;
}

// Block-wise merge: compare 8 elements of `a` against all 8 rotations of an
// 8-element block of `b`, then advance whichever block ends lower.
std::size_t intersection_size(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) noexcept {
  std::size_t i = 0, j = 0, count = 0;
  const std::size_t na = a.size() / 8 * 8;
  const std::size_t nb = b.size() / 8 * 8;
  const __m256i rotate = _mm256_setr_epi32(1, 2, 3, 4, 5, 6, 7, 0);

  while (i < na && j < nb) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + j));
    __m256i hits = _mm256_cmpeq_epi32(va, vb);
    for (int r = 1; r < 8; ++r) {
      vb = _mm256_permutevar8x32_epi32(vb, rotate);
      hits = _mm256_or_si256(hits, _mm256_cmpeq_epi32(va, vb));
    }
    count += static_cast<std::size_t>(
        __builtin_popcount(static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(hits)))));

    const std::uint32_t a_last = a[i + 7];
    const std::uint32_t b_last = b[j + 7];
    if (a_last <= b_last) i += 8;
    if (b_last <= a_last) j += 8;
  }

  // Finish with a scalar merge; elements already consumed on one side are
  // strictly below everything left on the other, so no match is counted twice.
  return count + scalar::intersection_size(a.subspan(i), b.subspan(j));
}

}  // namespace netstab::simd::avx2

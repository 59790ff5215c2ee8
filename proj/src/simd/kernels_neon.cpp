#include "netstab/simd/kernels.hpp"

#if defined(__aarch64__) || defined(__ARM_NEON)

#include <arm_neon.h>

namespace netstab::simd::neon {

DistanceTotals reduce_distances(std::span<const std::int32_t> dist) noexcept {
  const std::int32_t* p = dist.data();
  const std::size_t blocks = dist.size() / 4 * 4;
  const int32x4_t zero = vdupq_n_s32(0);
  int64x2_t sum_lo = vdupq_n_s64(0);
  int64x2_t sum_hi = vdupq_n_s64(0);
  int32x4_t vmax = zero;
  uint32x4_t vcount = vdupq_n_u32(0);
  std::uint64_t count = 0;

  for (std::size_t i = 0; i < blocks; i += 4) {
    const int32x4_t d = vld1q_s32(p + i);
    const uint32x4_t positive = vcgtq_s32(d, zero);
    const int32x4_t kept = vandq_s32(d, vreinterpretq_s32_u32(positive));
    sum_lo = vaddw_s32(sum_lo, vget_low_s32(kept));
    sum_hi = vaddw_s32(sum_hi, vget_high_s32(kept));
    vmax = vmaxq_s32(vmax, kept);
    vcount = vsubq_u32(vcount, positive);  // mask lanes are all-ones (-1)
  }
  count += vaddvq_u32(vcount);

  DistanceTotals t;
  t.sum = static_cast<std::uint64_t>(vaddvq_s64(sum_lo) + vaddvq_s64(sum_hi));
  t.count = count;
  t.max = vmaxvq_s32(vmax);

  const DistanceTotals tail = scalar::reduce_distances(dist.subspan(blocks));
  t.sum += tail.sum;
  t.count += tail.count;
  if (tail.max > t.max) t.max = tail.max;
  return t;
}

std::size_t intersection_size(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) noexcept {
  std::size_t i = 0, j = 0, count = 0;
  const std::size_t na = a.size() / 4 * 4;
  const std::size_t nb = b.size() / 4 * 4;
  while (i < na && j < nb) {
    const uint32x4_t va = vld1q_u32(a.data() + i);
    const uint32x4_t vb = vld1q_u32(b.data() + j);
    uint32x4_t hits = vceqq_u32(va, vb);
    hits = vorrq_u32(hits, vceqq_u32(va, vextq_u32(vb, vb, 1)));
    hits = vorrq_u32(hits, vceqq_u32(va, vextq_u32(vb, vb, 2)));
    hits = vorrq_u32(hits, vceqq_u32(va, vextq_u32(vb, vb, 3)));
    count += vaddvq_u32(vshrq_n_u32(hits, 31));
    const std::uint32_t a_last = a[i + 3];
    const std::uint32_t b_last = b[j + 3];
    if (a_last <= b_last) i += 4;
    if (b_last <= a_last) j += 4;
  }
  return count + scalar::intersection_size(a.subspan(i), b.subspan(j));
}

}  // namespace netstab::simd::neon

#endif

#include "netstab/simd/kernels.hpp"

namespace netstab::simd::scalar {

DistanceTotals reduce_distances(std::span<const std::int32_t> dist) noexcept {
  DistanceTotals t;
  for (const std::int32_t d : dist) {
    if (d > 0) {
      t.sum += static_cast<std::uint64_t>(d);
      ++t.count;
      if (d > t.max) t.max = d;
    }
  }
  return t;
}

std::size_t intersection_size(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) noexcept {
  std::size_t i = 0, j = 0, count = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace netstab::simd::scalar

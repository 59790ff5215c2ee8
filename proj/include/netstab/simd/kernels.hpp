#pragma once

// Data-parallel inner loops of the shortest-path and triangle kernels.
//
// Every kernel has a portable scalar reference in netstab::simd::scalar and
// optional vector variants (AVX2 on x86-64, NEON on AArch64). The variant is
// chosen once at runtime from the CPU's capabilities; NETSTAB_SIMD=scalar
// (or avx2 / neon) in the environment overrides the choice. All variants
// return bit-identical results, which the equivalence tests enforce.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace netstab::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// Reduction of a BFS distance row. Entries < 0 mean unreachable, 0 is the
/// source itself; only entries > 0 contribute.
struct DistanceTotals {
  std::uint64_t sum = 0;
  std::uint64_t count = 0;
  std::int32_t max = 0;

  friend bool operator==(const DistanceTotals&, const DistanceTotals&) = default;
};

namespace scalar {
DistanceTotals reduce_distances(std::span<const std::int32_t> dist) noexcept;
/// |a ∩ b| for strictly increasing sequences.
std::size_t intersection_size(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
DistanceTotals reduce_distances(std::span<const std::int32_t> dist) noexcept;
std::size_t intersection_size(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) noexcept;
}  // namespace avx2
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
namespace neon {
DistanceTotals reduce_distances(std::span<const std::int32_t> dist) noexcept;
std::size_t intersection_size(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) noexcept;
}  // namespace neon
#endif

struct KernelTable {
  Isa isa = Isa::scalar;
  DistanceTotals (*reduce_distances)(std::span<const std::int32_t>) noexcept = nullptr;
  std::size_t (*intersection_size)(std::span<const std::uint32_t>, std::span<const std::uint32_t>) noexcept =
      nullptr;
};

/// Variants this binary was built with and this CPU can execute.
std::vector<Isa> supported_isas();

/// Table for a specific variant; throws std::invalid_argument if unsupported.
const KernelTable& kernels_for(Isa isa);

/// The runtime-selected table.
const KernelTable& kernels();

}  // namespace netstab::simd

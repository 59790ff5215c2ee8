#include <cstdlib>
#include <stdexcept>
#include <string>

#include "netstab/simd/kernels.hpp"

namespace netstab::simd {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::reduce_distances, &scalar::intersection_size};

#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::reduce_distances, &avx2::intersection_size};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
}
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
constexpr KernelTable kNeon{Isa::neon, &neon::reduce_distances, &neon::intersection_size};
#endif

const KernelTable& select_table() {
  const std::vector<Isa> available = supported_isas();
  if (const char* forced = std::getenv("NETSTAB_SIMD")) {
    for (Isa isa : available) {
      if (isa_name(isa) == forced) return kernels_for(isa);
    }
  }
  return kernels_for(available.back());
}

}  // namespace

std::vector<Isa> supported_isas() {
  std::vector<Isa> out{Isa::scalar};
#if defined(__x86_64__) || defined(_M_X64)
  if (cpu_has_avx2()) out.push_back(Isa::avx2);
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
  out.push_back(Isa::neon);
#endif
  return out;
}

const KernelTable& kernels_for(Isa isa) {
  switch (isa) {
    case Isa::scalar: return kScalar;
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2:
      if (cpu_has_avx2()) return kAvx2;
      break;
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
    case Isa::neon: return kNeon;
#endif
    default: break;
  }
  throw std::invalid_argument("SIMD variant '" + std::string(isa_name(isa)) + "' is not available");
}

const KernelTable& kernels() {
  static const KernelTable& table = select_table();
  return table;
}

}  // namespace netstab::simd

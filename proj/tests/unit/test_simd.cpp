#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <random>
#include <set>

#include "../oracles.hpp"
#include "netstab/metrics_global.hpp"
#include "netstab/simd/kernels.hpp"

using namespace netstab;

namespace {

std::vector<std::int32_t> random_row(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::int32_t> row(n);
  for (auto& d : row) {
    const auto r = rng() % 10;
    d = r < 3 ? -1 : r == 3 ? 0 : static_cast<std::int32_t>(rng() % (r == 9 ? 2000000 : 40));
  }
  return row;
}

std::vector<std::uint32_t> random_set(std::mt19937_64& rng, std::size_t size, std::uint32_t universe) {
  std::set<std::uint32_t> s;
  while (s.size() < size) s.insert(static_cast<std::uint32_t>(rng() % universe));
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("scalar kernels") {
  const std::vector<std::int32_t> row{-1, 0, 3, 1, -1, 7};
  const auto t = simd::scalar::reduce_distances(row);
  CHECK(t.sum == 11);
  CHECK(t.count == 3);
  CHECK(t.max == 7);
  CHECK(simd::scalar::reduce_distances({}) == simd::DistanceTotals{});
  const std::vector<std::uint32_t> a{1, 3, 5, 9}, b{2, 3, 9, 10};
  CHECK(simd::scalar::intersection_size(a, b) == 2);
}

TEST_CASE("every vector variant matches the scalar reference") {
  const auto isas = simd::supported_isas();
  REQUIRE(isas.front() == simd::Isa::scalar);
  std::mt19937_64 rng(2024);
  for (const simd::Isa isa : isas) {
    CAPTURE(simd::isa_name(isa));
    const simd::KernelTable& k = simd::kernels_for(isa);
    CHECK(k.isa == isa);
    for (std::size_t n = 0; n < 80; ++n) {
      for (int rep = 0; rep < 5; ++rep) {
        const auto row = random_row(rng, n);
        CHECK(k.reduce_distances(row) == simd::scalar::reduce_distances(row));
      }
    }
    for (int rep = 0; rep < 50; ++rep) {
      const auto row = random_row(rng, 1000 + rng() % 5000);
      CHECK(k.reduce_distances(row) == simd::scalar::reduce_distances(row));
    }
    for (int rep = 0; rep < 2000; ++rep) {
      const std::uint32_t universe = rep % 2 ? 64 : 100000;
      const auto a = random_set(rng, rng() % std::min<std::uint32_t>(60, universe), universe);
      const auto b = random_set(rng, rng() % std::min<std::uint32_t>(60, universe), universe);
      CHECK(k.intersection_size(a, b) == simd::scalar::intersection_size(a, b));
    }
    const std::vector<std::uint32_t> big{0u, 7u, 0xFFFFFFF0u, 0xFFFFFFFFu};
    const std::vector<std::uint32_t> big2{7u, 8u, 9u, 10u, 11u, 12u, 13u, 14u, 0xFFFFFFFFu};
    CHECK(k.intersection_size(big, big2) == 2);
  }
}

TEST_CASE("unknown variants are refused") {
  const auto isas = simd::supported_isas();
  for (const simd::Isa isa : {simd::Isa::avx2, simd::Isa::neon}) {
    if (std::find(isas.begin(), isas.end(), isa) == isas.end()) {
      CHECK_THROWS_AS(simd::kernels_for(isa), std::invalid_argument);
    }
  }
}

TEST_CASE("environment override selects the variant") {
  const char* forced = std::getenv("NETSTAB_SIMD");
  const auto& table = simd::kernels();
  if (forced) {
    CHECK(simd::isa_name(table.isa) == std::string_view(forced));
  } else {
    CHECK(table.isa == simd::supported_isas().back());
  }
}

TEST_CASE("metrics agree with oracles whichever variant is active") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const CommGraph g = oracle::random_digraph(40, 0.08, seed);
    const auto stats = oracle::distance_stats(oracle::floyd_warshall(g));
    const auto m = global_metrics(g);
    CHECK(m.reachable_pairs == stats.pairs);
    CHECK(m.diameter == stats.diameter);
    CHECK(oracle::close_rel(m.clustering_coefficient, oracle::triple_clustering(g), 1e-12));
  }
}

#pragma once

#include <cstdint>
#include <vector>

#include "netstab/graph.hpp"

namespace netstab {

struct SweepOptions {
  bool symmetrize = false;   // treat every arc as bidirectional
  bool betweenness = true;   // accumulate pair dependencies (directed only)
  unsigned threads = 0;      // 0 = all cores; results do not depend on it
};

/// Everything one BFS per source yields: per-source reach and distance sums
/// (closeness), pooled distance statistics (ADARP, diameter) and, when
/// requested, raw betweenness.
struct SweepResult {
  std::vector<std::uint64_t> reach;         // |R(v)|, v excluded
  std::vector<std::uint64_t> distance_sum;  // sum of d(v, u) over R(v)
  std::uint64_t reachable_pairs = 0;
  std::uint64_t total_distance = 0;
  std::int32_t diameter = 0;
  std::vector<double> betweenness;          // empty unless requested
};

/// Unweighted all-sources BFS with Brandes dependency accumulation.
/// Sources are split into a fixed number of chunks that depends only on the
/// node count; chunk partials are merged in chunk order, so the output is
/// bitwise independent of the worker count.
SweepResult sweep_shortest_paths(const CommGraph& graph, const SweepOptions& options = {});

}  // namespace netstab

#pragma once

#include <cstdint>

#include "netstab/graph.hpp"
#include "netstab/paths.hpp"

namespace netstab {

struct GlobalOptions {
  bool symmetrize_distances = false;  // ADARP and diameter only
  unsigned threads = 0;
};

struct GlobalMetrics {
  double adarp = 0;
  std::int32_t diameter = 0;
  double clustering_coefficient = 0;
  double average_degree = 0;
  double giant_component_fraction = 0;
  std::uint64_t reachable_pairs = 0;
  bool no_reachable_pairs = true;

  friend bool operator==(const GlobalMetrics&, const GlobalMetrics&) = default;
};

// Each of these throws InputError("empty graph") when the graph has no nodes.

/// Mean finite directed hop distance over ordered pairs u != v. Zero when
/// no pair is reachable (see GlobalMetrics::no_reachable_pairs).
double adarp(const CommGraph& graph, const GlobalOptions& options = {});
std::int32_t diameter(const CommGraph& graph, const GlobalOptions& options = {});

/// Transitivity of the symmetrized simple graph: closed / connected triples.
double clustering_coefficient(const CommGraph& graph);

/// 2m / n over distinct arcs.
double average_degree(const CommGraph& graph);

/// Largest weakly connected component size over n.
double giant_component_fraction(const CommGraph& graph);

/// Component sizes of the weakly connected components, descending.
std::vector<std::size_t> weak_component_sizes(const CommGraph& graph);

GlobalMetrics global_metrics(const CommGraph& graph, const GlobalOptions& options = {});

/// Same, reusing a sweep already computed with matching symmetrization.
GlobalMetrics global_metrics(const CommGraph& graph, const SweepResult& distances);

}  // namespace netstab

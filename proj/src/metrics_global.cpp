#include "netstab/metrics_global.hpp"

#include <algorithm>
#include <numeric>

#include "netstab/simd/kernels.hpp"

namespace netstab {

namespace {

void require_nodes(const CommGraph& graph) {
  if (graph.empty()) throw InputError("empty graph");
}

SweepResult distance_sweep(const CommGraph& graph, const GlobalOptions& options) {
  return sweep_shortest_paths(graph, {.symmetrize = options.symmetrize_distances,
                                      .betweenness = false,
                                      .threads = options.threads});
}

class DisjointSets {
public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }
  std::size_t size_of(std::size_t x) { return size_[find(x)]; }

private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

double adarp(const CommGraph& graph, const GlobalOptions& options) {
  require_nodes(graph);
  const SweepResult sweep = distance_sweep(graph, options);
  if (sweep.reachable_pairs == 0) return 0.0;
  return static_cast<double>(sweep.total_distance) / static_cast<double>(sweep.reachable_pairs);
}

std::int32_t diameter(const CommGraph& graph, const GlobalOptions& options) {
  require_nodes(graph);
  return distance_sweep(graph, options).diameter;
}

double clustering_coefficient(const CommGraph& graph) {
  require_nodes(graph);
  const auto adj = graph.undirected_adjacency();
  const auto& kernel = simd::kernels();
  std::uint64_t closed = 0;   // 3 x triangles: one per (edge, common neighbour)
  std::uint64_t triples = 0;  // connected triples centred on each node
  for (NodeIndex u = 0; u < adj.size(); ++u) {
    const std::uint64_t d = adj[u].size();
    if (d >= 2) triples += d * (d - 1) / 2;
    for (const NodeIndex v : adj[u]) {
      if (v <= u) continue;
      closed += kernel.intersection_size(adj[u], adj[v]);
    }
  }
  if (triples == 0) return 0.0;
  return static_cast<double>(closed) / static_cast<double>(triples);
}

double average_degree(const CommGraph& graph) {
  require_nodes(graph);
  return 2.0 * static_cast<double>(graph.arc_count()) / static_cast<double>(graph.node_count());
}

std::vector<std::size_t> weak_component_sizes(const CommGraph& graph) {
  DisjointSets sets(graph.node_count());
  for (const Arc& a : graph.arcs()) sets.unite(a.source, a.target);
  std::vector<std::size_t> sizes;
  for (std::size_t v = 0; v < graph.node_count(); ++v) {
    if (sets.find(v) == v) sizes.push_back(sets.size_of(v));
  }
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

double giant_component_fraction(const CommGraph& graph) {
  require_nodes(graph);
  const auto sizes = weak_component_sizes(graph);
  return static_cast<double>(sizes.front()) / static_cast<double>(graph.node_count());
}

GlobalMetrics global_metrics(const CommGraph& graph, const SweepResult& distances) {
  require_nodes(graph);
  GlobalMetrics g;
  g.reachable_pairs = distances.reachable_pairs;
  g.no_reachable_pairs = distances.reachable_pairs == 0;
  g.adarp = g.no_reachable_pairs ? 0.0
                                 : static_cast<double>(distances.total_distance) /
                                       static_cast<double>(distances.reachable_pairs);
  g.diameter = distances.diameter;
  g.clustering_coefficient = clustering_coefficient(graph);
  g.average_degree = average_degree(graph);
  g.giant_component_fraction = giant_component_fraction(graph);
  return g;
}

GlobalMetrics global_metrics(const CommGraph& graph, const GlobalOptions& options) {
  require_nodes(graph);
  return global_metrics(graph, distance_sweep(graph, options));
}

}  // namespace netstab

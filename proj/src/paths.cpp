#include "netstab/paths.hpp"

#include <algorithm>

#include "netstab/parallel.hpp"
#include "netstab/simd/kernels.hpp"

namespace netstab {

namespace {

constexpr std::size_t kMaxChunks = 64;

struct Csr {
  std::vector<std::size_t> offsets;
  std::vector<NodeIndex> targets;

  std::span<const NodeIndex> neighbors(NodeIndex v) const {
    return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
  }
};

Csr make_adjacency(const CommGraph& graph, bool symmetrize) {
  Csr csr;
  const std::size_t n = graph.node_count();
  csr.offsets.assign(n + 1, 0);
  if (symmetrize) {
    const auto adj = graph.undirected_adjacency();
    for (NodeIndex v = 0; v < n; ++v) csr.offsets[v + 1] = csr.offsets[v] + adj[v].size();
    csr.targets.reserve(csr.offsets[n]);
    for (const auto& list : adj) csr.targets.insert(csr.targets.end(), list.begin(), list.end());
  } else {
    for (NodeIndex v = 0; v < n; ++v) csr.offsets[v + 1] = csr.offsets[v] + graph.out_degree(v);
    csr.targets.reserve(csr.offsets[n]);
    for (NodeIndex v = 0; v < n; ++v) {
      const auto out = graph.out_neighbors(v);
      csr.targets.insert(csr.targets.end(), out.begin(), out.end());
    }
  }
  return csr;
}

struct Workspace {
  std::vector<std::int32_t> dist;
  std::vector<double> sigma;  // path counts; inverted once the forward pass ends
  std::vector<double> dep;    // delta / sigma
  std::vector<NodeIndex> order;
  std::vector<NodeIndex> dag_tail, dag_head;  // shortest-path arcs in discovery order

  Workspace(std::size_t n, std::size_t m)
      : dist(n, -1), sigma(n, 0.0), dep(n, 0.0), order(n), dag_tail(m), dag_head(m) {}
};

}  // namespace

SweepResult sweep_shortest_paths(const CommGraph& graph, const SweepOptions& options) {
  const std::size_t n = graph.node_count();
  SweepResult result;
  result.reach.assign(n, 0);
  result.distance_sum.assign(n, 0);
  if (n == 0) return result;

  const Csr adj = make_adjacency(graph, options.symmetrize);
  const auto& kernel = simd::kernels();
  const std::size_t chunks = std::min(n, kMaxChunks);
  std::vector<std::vector<double>> partial(options.betweenness ? chunks : 0);
  std::vector<std::int32_t> chunk_diameter(chunks, 0);

  auto run_chunk = [&]<bool Betweenness>(std::size_t c) {
    const auto first = static_cast<NodeIndex>(c * n / chunks);
    const auto last = static_cast<NodeIndex>((c + 1) * n / chunks);
    Workspace ws(n, Betweenness ? adj.targets.size() : 0);
    std::vector<double> centrality;
    if constexpr (Betweenness) centrality.assign(n, 0.0);
    std::int32_t* dist = ws.dist.data();
    double* sigma = ws.sigma.data();
    double* dep = ws.dep.data();
    NodeIndex* queue = ws.order.data();

    for (NodeIndex s = first; s < last; ++s) {
      std::size_t tail = 1, arcs = 0;
      queue[0] = s;
      dist[s] = 0;
      sigma[s] = 1.0;
      for (std::size_t head = 0; head < tail; ++head) {
        const NodeIndex v = queue[head];
        const std::int32_t next = dist[v] + 1;
        const double sigma_v = sigma[v];
        for (const NodeIndex w : adj.neighbors(v)) {
          std::int32_t d = dist[w];
          if (d < 0) {
            dist[w] = d = next;
            queue[tail++] = w;
          }
          if constexpr (Betweenness) {
            if (d == next) {
              sigma[w] += sigma_v;
              ws.dag_tail[arcs] = v;
              ws.dag_head[arcs] = w;
              ++arcs;
            }
          }
        }
      }

      const simd::DistanceTotals totals = kernel.reduce_distances(ws.dist);
      result.reach[s] = totals.count;
      result.distance_sum[s] = totals.sum;
      chunk_diameter[c] = std::max(chunk_diameter[c], totals.max);

      if constexpr (Betweenness) {
        // delta(v) = sigma(v) * sum over DAG successors w of (1 + delta(w)) / sigma(w).
        // With dep = delta / sigma each term is 1 / sigma(w) + dep(w). Walking
        // the DAG arcs backwards settles every w before its predecessors.
        for (std::size_t k = 1; k < tail; ++k) sigma[queue[k]] = 1.0 / sigma[queue[k]];
        for (std::size_t k = arcs; k-- > 0;) {
          const NodeIndex w = ws.dag_head[k];
          dep[ws.dag_tail[k]] += sigma[w] + dep[w];
        }
        for (std::size_t k = 1; k < tail; ++k) {
          const NodeIndex v = queue[k];
          centrality[v] += dep[v] / sigma[v];
        }
      }
      for (std::size_t k = 0; k < tail; ++k) {
        const NodeIndex v = queue[k];
        dist[v] = -1;
        sigma[v] = 0.0;
        dep[v] = 0.0;
      }
    }
    if constexpr (Betweenness) partial[c] = std::move(centrality);
  };
  parallel_for(chunks, options.threads, [&](std::size_t c) {
    if (options.betweenness) {
      run_chunk.template operator()<true>(c);
    } else {
      run_chunk.template operator()<false>(c);
    }
  });

  for (NodeIndex v = 0; v < n; ++v) {
    result.reachable_pairs += result.reach[v];
    result.total_distance += result.distance_sum[v];
  }
  result.diameter = *std::max_element(chunk_diameter.begin(), chunk_diameter.end());
  if (options.betweenness) {
    result.betweenness.assign(n, 0.0);
    for (const auto& part : partial) {
      for (NodeIndex v = 0; v < n; ++v) result.betweenness[v] += part[v];
    }
  }
  return result;
}

}  // namespace netstab

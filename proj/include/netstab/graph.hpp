#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "netstab/types.hpp"

namespace netstab {

using NodeIndex = std::uint32_t;

struct Arc {
  NodeIndex source = 0;
  NodeIndex target = 0;
  std::uint64_t weight = 1;  // number of inducing messages
  Timestamp first_seen{};
  Timestamp last_seen{};
};

struct BuildStats {
  std::size_t dangling_references = 0;
  std::size_t dropped_self_loops = 0;
};

/// Immutable directed interaction graph. Nodes are kept in lexicographic
/// order of their identifiers; arcs are unique per ordered pair and sorted
/// by (source, target).
class CommGraph {
public:
  CommGraph() = default;

  /// Validates and normalizes: duplicate (source, target) arcs are merged
  /// by summing weights. Self-loops, zero weights, out-of-range endpoints
  /// and duplicate node ids throw InputError.
  static CommGraph from_arcs(Channel channel, std::vector<NodeId> nodes, std::vector<Arc> arcs,
                             BuildStats stats = {});

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t arc_count() const noexcept { return arcs_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }
  Channel channel() const noexcept { return channel_; }
  const BuildStats& build_stats() const noexcept { return stats_; }

  std::span<const NodeId> nodes() const noexcept { return nodes_; }
  const NodeId& node(NodeIndex v) const { return nodes_.at(v); }
  std::optional<NodeIndex> find(const NodeId& id) const;

  std::span<const Arc> arcs() const noexcept { return arcs_; }
  const Arc* find_arc(NodeIndex source, NodeIndex target) const;

  std::span<const NodeIndex> out_neighbors(NodeIndex v) const {
    return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
  }
  std::span<const NodeIndex> in_neighbors(NodeIndex v) const {
    return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
  }
  std::size_t out_degree(NodeIndex v) const { return out_offsets_[v + 1] - out_offsets_[v]; }
  std::size_t in_degree(NodeIndex v) const { return in_offsets_[v + 1] - in_offsets_[v]; }
  std::size_t degree(NodeIndex v) const { return out_degree(v) + in_degree(v); }

  /// Sorted neighbor lists of the symmetrized simple graph.
  std::vector<std::vector<NodeIndex>> undirected_adjacency() const;

  std::uint64_t total_weight() const noexcept;

private:
  Channel channel_ = Channel::email;
  std::vector<NodeId> nodes_;
  std::unordered_map<NodeId, NodeIndex> index_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeIndex> out_targets_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeIndex> in_sources_;
  BuildStats stats_;
};

/// Message id -> author lookup used to resolve reply and retweet links.
class MessageAuthorIndex {
public:
  MessageAuthorIndex() = default;
  explicit MessageAuthorIndex(std::span<const MessageEvent> events);
  const NodeId* author_of(const std::string& message_id) const;

private:
  std::unordered_map<std::string, NodeId> authors_;
};

/// Accounts a message induces an arc towards, deduplicated, in first-seen
/// order and excluding the sender. Email: the recipients. Micropost: the
/// mentions plus the authors of the replied-to and retweeted messages.
/// Unresolvable references increment `*dangling`; self targets increment
/// `*self_loops`.
std::vector<NodeId> induced_targets(const MessageEvent& event, Channel link_rule,
                                    const MessageAuthorIndex& authors,
                                    std::size_t* dangling = nullptr,
                                    std::size_t* self_loops = nullptr);

CommGraph build_graph(std::span<const MessageEvent> events, Channel link_rule);
CommGraph build_graph(std::span<const MessageEvent> events, Channel link_rule,
                      const MessageAuthorIndex& authors);

struct Snapshot {
  Timestamp start{};
  Timestamp end{};  // exclusive, except for the last window
  CommGraph graph;
};

struct SnapshotSeries {
  Duration window_length{};
  std::vector<Snapshot> windows;
};

struct TimeSpan {
  Timestamp begin{};
  Timestamp end{};
};

std::optional<TimeSpan> event_span(std::span<const MessageEvent> events);

/// Contiguous windows of `window_length` starting at the first event (or
/// at `span->begin`); ceil(span / length) windows, at least one. The last
/// window includes its end point.
SnapshotSeries window_slices(std::span<const MessageEvent> events, Duration window_length,
                             Channel link_rule, std::optional<TimeSpan> span = std::nullopt);

struct DegreeSummary {
  std::size_t min = 0;
  double median = 0;
  std::size_t max = 0;
  std::size_t min_out = 0, max_out = 0;
  double median_out = 0;
  std::size_t min_in = 0, max_in = 0;
  double median_in = 0;
  std::optional<double> tail_ratio;  // max / median; absent when median is 0
};

DegreeSummary degree_summary(const CommGraph& graph);

}  // namespace netstab

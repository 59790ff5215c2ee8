#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "netstab/graph.hpp"
#include "netstab/paths.hpp"
#include "netstab/text.hpp"

namespace netstab {

/// Row order of the node-level stability tables.
inline constexpr std::array<std::string_view, 13> kNodeMetricNames = {
    "alter_art", "ego_art", "alter_nudges", "ego_nudges", "activity", "contribution_index",
    "betweenness", "betweenness_oscillations", "closeness", "degree", "sentiment",
    "emotionality", "complexity"};

struct NodeMetricRecord {
  NodeId node;
  std::uint32_t degree = 0;
  std::uint32_t in_degree = 0;
  std::uint32_t out_degree = 0;
  double closeness = 0;
  double betweenness = 0;
  std::uint32_t betweenness_oscillations = 0;
  std::uint64_t activity = 0;
  std::uint64_t messages_received = 0;
  std::optional<double> contribution_index;
  std::optional<double> ego_art;  // seconds
  std::optional<double> alter_art;
  std::optional<double> ego_nudges;
  std::optional<double> alter_nudges;
  std::optional<double> sentiment;
  std::optional<double> emotionality;
  std::optional<double> emotionality_var;
  std::optional<double> complexity;  // bits per token

  /// Value of kNodeMetricNames[k].
  std::optional<double> metric(std::size_t k) const;
};

struct NodeMetricOptions {
  Channel link_rule = Channel::email;
  Duration window = Duration{30 * 86400};
  Duration horizon = Duration{14 * 86400};
  std::optional<TimeSpan> window_span;  // defaults to the stream's own span
  unsigned threads = 0;
};

struct NodeMetricTable {
  std::vector<NodeMetricRecord> records;  // graph node order
  bool oscillation_series_too_short = false;
  std::size_t windows = 0;
  std::size_t response_pairs = 0;
};

/// All node-level metrics for the nodes of `graph`. Structural metrics come
/// from `graph`; volume, interaction and text metrics from `events`.
/// `sweep` may carry a directed sweep of `graph` with betweenness.
NodeMetricTable compute_node_metrics(const CommGraph& graph, std::span<const MessageEvent> events,
                                     const SentimentScorer& scorer, const NodeMetricOptions& options,
                                     const SweepResult* sweep = nullptr);

/// node_id, the 13 metrics in table order, then in_degree, out_degree,
/// emotionality_var. Undefined values are empty cells.
void write_node_metrics_csv(std::ostream& out, const NodeMetricTable& table);

}  // namespace netstab

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netstab/graph.hpp"
#include "netstab/spam.hpp"

namespace netstab {

struct RemovalPlan {
  enum class Kind { spammers, bottom, top_percentile, top_percentile_plus_bottom, spammers_plus_bottom, custom };

  Kind kind = Kind::bottom;
  double percentile = 0;           // top_percentile kinds, in (0, 100)
  std::vector<NodeId> custom_nodes;
  std::string source;              // custom:<file> path, for labels

  bool needs_verdicts() const {
    return kind == Kind::spammers || kind == Kind::spammers_plus_bottom;
  }
};

/// `spammers | bottom | top<p> | top<p>+bottom | spammers+bottom | custom:<file>`.
/// Custom files list one node id per line.
RemovalPlan parse_plan(std::string_view text);
std::vector<RemovalPlan> parse_plan_list(std::string_view comma_separated);
std::string plan_label(const RemovalPlan& plan);

struct Selection {
  std::vector<NodeIndex> nodes;  // sorted, unique
  std::vector<NodeId> skipped;   // custom ids not present in the graph
};

/// Nodes with total degree <= 1.
std::vector<NodeIndex> bottom_nodes(const CommGraph& graph);

/// Every node whose total degree is >= the degree found at rank
/// ceil(p n / 100) of the descending degree order (ties included).
std::vector<NodeIndex> top_percentile_nodes(const CommGraph& graph, double percentile);

/// Throws InputError for a spammer plan without verdicts.
Selection select_nodes(const CommGraph& graph, const RemovalPlan& plan, const Classification* verdicts);

/// Simultaneous removal of `nodes` and all their arcs.
CommGraph remove_nodes(const CommGraph& graph, std::span<const NodeIndex> nodes);

/// The message stream seen by the reduced network: messages from removed
/// senders are dropped; removed recipients/mentions are stripped; emails
/// left without recipients are dropped.
std::vector<MessageEvent> restrict_events(std::span<const MessageEvent> events, const CommGraph& graph,
                                          std::span<const NodeIndex> removed);

}  // namespace netstab

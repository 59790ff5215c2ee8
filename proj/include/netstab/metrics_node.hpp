#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "netstab/graph.hpp"
#include "netstab/paths.hpp"

namespace netstab {

// ---- structural centralities -------------------------------------------------

struct DegreeCentrality {
  std::uint32_t in = 0;
  std::uint32_t out = 0;
  std::uint32_t total = 0;

  friend bool operator==(const DegreeCentrality&, const DegreeCentrality&) = default;
};

/// Arc counts (not message counts), indexed by NodeIndex.
std::vector<DegreeCentrality> degree_centrality(const CommGraph& graph);

/// Reachability-scaled closeness: (r/(n-1)) * (r / sum of distances to the
/// r reachable nodes); 0 when nothing is reachable or n = 1.
double closeness_value(std::uint64_t reach, std::uint64_t distance_sum, std::size_t n);
std::vector<double> closeness_from_sweep(const SweepResult& sweep);
std::vector<double> closeness_centrality(const CommGraph& graph, unsigned threads = 0);

/// Raw directed betweenness, sum over s != v != t of sigma_st(v) / sigma_st.
std::vector<double> betweenness_centrality(const CommGraph& graph, unsigned threads = 0);

// ---- betweenness oscillations ------------------------------------------------

struct OscillationCount {
  std::uint32_t count = 0;
  bool series_too_short = false;
};

/// Interior strict local extrema after collapsing runs of equal values.
OscillationCount count_oscillations(std::span<const double> series);

struct OscillationTable {
  std::vector<std::uint32_t> counts;  // aligned with the requested nodes
  bool series_too_short = false;
};

/// Per-window betweenness for each of `nodes` (0 where a node is absent
/// from a window) followed by count_oscillations.
OscillationTable betweenness_oscillations(const SnapshotSeries& series, std::span<const NodeId> nodes,
                                          unsigned threads = 0);
OscillationCount betweenness_oscillations(const SnapshotSeries& series, const NodeId& node);

// ---- message volume ------------------------------------------------------------

struct MessageTally {
  std::uint64_t sent = 0;      // messages authored
  std::uint64_t received = 0;  // induced-target occurrences
};

std::unordered_map<NodeId, MessageTally> tally_messages(std::span<const MessageEvent> events,
                                                        Channel link_rule);

std::uint64_t activity(std::span<const MessageEvent> events, const NodeId& node);

/// (S - R) / (S + R); absent when S + R = 0.
std::optional<double> contribution_index(std::uint64_t sent, std::uint64_t received);
std::optional<double> contribution_index(std::span<const MessageEvent> events, const NodeId& node,
                                         Channel link_rule);

// ---- response pairing ------------------------------------------------------------

struct ResponsePair {
  std::string prompt_id;
  std::string response_id;
  NodeId prompter;
  NodeId responder;
  Duration latency{};
  std::size_t run_length = 1;
};

struct OpenRun {
  NodeId prompter;
  NodeId responder;
  std::size_t length = 0;
  bool expired = false;  // dropped because a later reply fell outside the horizon
};

struct PairingResult {
  std::vector<ResponsePair> pairs;
  std::vector<OpenRun> open_runs;
  std::size_t prompt_messages = 0;  // directed messages that were not responses
};

/// Single sweep over (timestamp, message_id)-ordered events. A directed
/// message B->A answers the unanswered run of A->B prompts: the explicitly
/// referenced prompt when in_reply_to points into the run, otherwise the
/// earliest prompt still within `horizon`. The response closes the whole
/// run. A directed message that answers a run is not itself a prompt.
PairingResult pair_responses(std::span<const MessageEvent> events, Duration horizon, Channel link_rule);

struct EgoAlter {
  std::optional<double> ego;
  std::optional<double> alter;
};

/// Mean latency in seconds: ego over pairs the node answered, alter over
/// pairs the node prompted.
EgoAlter art(std::span<const ResponsePair> pairs, const NodeId& node);

/// Mean extra pings (run_length - 1): ego over runs the node sent, alter
/// over runs sent to the node.
EgoAlter nudges(std::span<const ResponsePair> pairs, const NodeId& node);

struct InteractionMetrics {
  std::optional<double> ego_art;
  std::optional<double> alter_art;
  std::optional<double> ego_nudges;
  std::optional<double> alter_nudges;
};

std::unordered_map<NodeId, InteractionMetrics> interaction_metrics(std::span<const ResponsePair> pairs);

}  // namespace netstab

#include "netstab/node_table.hpp"

#include <cstdio>
#include <ostream>

#include "netstab/ingest.hpp"
#include "netstab/metrics_node.hpp"

namespace netstab {

std::optional<double> NodeMetricRecord::metric(std::size_t k) const {
  switch (k) {
    case 0: return alter_art;
    case 1: return ego_art;
    case 2: return alter_nudges;
    case 3: return ego_nudges;
    case 4: return static_cast<double>(activity);
    case 5: return contribution_index;
    case 6: return betweenness;
    case 7: return static_cast<double>(betweenness_oscillations);
    case 8: return closeness;
    case 9: return static_cast<double>(degree);
    case 10: return sentiment;
    case 11: return emotionality;
    case 12: return complexity;
    default: return std::nullopt;
  }
}

NodeMetricTable compute_node_metrics(const CommGraph& graph, std::span<const MessageEvent> events,
                                     const SentimentScorer& scorer, const NodeMetricOptions& options,
                                     const SweepResult* sweep) {
  const std::size_t n = graph.node_count();
  NodeMetricTable table;
  table.records.resize(n);

  SweepResult local;
  if (sweep == nullptr) {
    local = sweep_shortest_paths(graph, {.betweenness = true, .threads = options.threads});
    sweep = &local;
  }
  const auto degrees = degree_centrality(graph);
  const auto closeness = closeness_from_sweep(*sweep);

  const SnapshotSeries series = window_slices(events, options.window, options.link_rule, options.window_span);
  table.windows = series.windows.size();
  const OscillationTable oscillations = betweenness_oscillations(series, graph.nodes(), options.threads);
  table.oscillation_series_too_short = oscillations.series_too_short;

  const auto tally = tally_messages(events, options.link_rule);
  const PairingResult pairing = pair_responses(events, options.horizon, options.link_rule);
  table.response_pairs = pairing.pairs.size();
  const auto interaction = interaction_metrics(pairing.pairs);
  const auto semantics = author_semantics(events, scorer);

  for (NodeIndex v = 0; v < n; ++v) {
    NodeMetricRecord& r = table.records[v];
    r.node = graph.node(v);
    r.degree = degrees[v].total;
    r.in_degree = degrees[v].in;
    r.out_degree = degrees[v].out;
    r.closeness = closeness[v];
    r.betweenness = sweep->betweenness.empty() ? 0.0 : sweep->betweenness[v];
    r.betweenness_oscillations = oscillations.counts[v];
    if (const auto it = tally.find(r.node); it != tally.end()) {
      r.activity = it->second.sent;
      r.messages_received = it->second.received;
    }
    r.contribution_index = contribution_index(r.activity, r.messages_received);
    if (const auto it = interaction.find(r.node); it != interaction.end()) {
      r.ego_art = it->second.ego_art;
      r.alter_art = it->second.alter_art;
      r.ego_nudges = it->second.ego_nudges;
      r.alter_nudges = it->second.alter_nudges;
    }
    if (const auto it = semantics.find(r.node); it != semantics.end()) {
      r.sentiment = it->second.sentiment;
      r.emotionality = it->second.emotionality;
      r.emotionality_var = it->second.emotionality_var;
      r.complexity = it->second.complexity;
    }
  }
  return table;
}

namespace {

std::string cell(std::optional<double> v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

}  // namespace

void write_node_metrics_csv(std::ostream& out, const NodeMetricTable& table) {
  out << "node_id";
  for (const auto name : kNodeMetricNames) out << ',' << name;
  out << ",in_degree,out_degree,emotionality_var\n";
  for (const NodeMetricRecord& r : table.records) {
    out << csv::quote(r.node.str());
    for (std::size_t k = 0; k < kNodeMetricNames.size(); ++k) out << ',' << cell(r.metric(k));
    out << ',' << r.in_degree << ',' << r.out_degree << ',' << cell(r.emotionality_var) << '\n';
  }
}

}  // namespace netstab

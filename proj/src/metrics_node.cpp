#include "netstab/metrics_node.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "netstab/parallel.hpp"

namespace netstab {

std::vector<DegreeCentrality> degree_centrality(const CommGraph& graph) {
  std::vector<DegreeCentrality> out(graph.node_count());
  for (NodeIndex v = 0; v < graph.node_count(); ++v) {
    out[v].in = static_cast<std::uint32_t>(graph.in_degree(v));
    out[v].out = static_cast<std::uint32_t>(graph.out_degree(v));
    out[v].total = out[v].in + out[v].out;
  }
  return out;
}

double closeness_value(std::uint64_t reach, std::uint64_t distance_sum, std::size_t n) {
  if (n <= 1 || reach == 0 || distance_sum == 0) return 0.0;
  const double r = static_cast<double>(reach);
  return (r / static_cast<double>(n - 1)) * (r / static_cast<double>(distance_sum));
}

std::vector<double> closeness_from_sweep(const SweepResult& sweep) {
  const std::size_t n = sweep.reach.size();
  std::vector<double> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = closeness_value(sweep.reach[v], sweep.distance_sum[v], n);
  return out;
}

std::vector<double> closeness_centrality(const CommGraph& graph, unsigned threads) {
  return closeness_from_sweep(sweep_shortest_paths(graph, {.betweenness = false, .threads = threads}));
}

std::vector<double> betweenness_centrality(const CommGraph& graph, unsigned threads) {
  return sweep_shortest_paths(graph, {.betweenness = true, .threads = threads}).betweenness;
}

OscillationCount count_oscillations(std::span<const double> series) {
  if (series.size() < 3) return {0, true};
  std::vector<double> collapsed;
  collapsed.reserve(series.size());
  for (const double x : series) {
    if (collapsed.empty() || collapsed.back() != x) collapsed.push_back(x);
  }
  OscillationCount result;
  for (std::size_t i = 1; i + 1 < collapsed.size(); ++i) {
    const double prev = collapsed[i - 1], cur = collapsed[i], next = collapsed[i + 1];
    if ((cur > prev && cur > next) || (cur < prev && cur < next)) ++result.count;
  }
  return result;
}

OscillationTable betweenness_oscillations(const SnapshotSeries& series, std::span<const NodeId> nodes,
                                          unsigned threads) {
  const std::size_t windows = series.windows.size();
  std::vector<std::vector<double>> per_node(nodes.size(), std::vector<double>(windows, 0.0));
  for (std::size_t w = 0; w < windows; ++w) {
    const CommGraph& g = series.windows[w].graph;
    if (g.empty()) continue;
    const auto scores = betweenness_centrality(g, threads);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (const auto v = g.find(nodes[i])) per_node[i][w] = scores[*v];
    }
  }
  OscillationTable table;
  table.counts.resize(nodes.size());
  table.series_too_short = windows < 3;
  for (std::size_t i = 0; i < nodes.size(); ++i) table.counts[i] = count_oscillations(per_node[i]).count;
  return table;
}

OscillationCount betweenness_oscillations(const SnapshotSeries& series, const NodeId& node) {
  std::vector<double> values;
  values.reserve(series.windows.size());
  for (const Snapshot& snap : series.windows) {
    const auto v = snap.graph.find(node);
    values.push_back(v ? betweenness_centrality(snap.graph, 1)[*v] : 0.0);
  }
  return count_oscillations(values);
}

std::unordered_map<NodeId, MessageTally> tally_messages(std::span<const MessageEvent> events,
                                                        Channel link_rule) {
  const MessageAuthorIndex authors(events);
  std::unordered_map<NodeId, MessageTally> tally;
  for (const MessageEvent& e : events) {
    ++tally[e.sender].sent;
    for (const NodeId& t : induced_targets(e, link_rule, authors)) ++tally[t].received;
  }
  return tally;
}

std::uint64_t activity(std::span<const MessageEvent> events, const NodeId& node) {
  return static_cast<std::uint64_t>(
      std::count_if(events.begin(), events.end(), [&](const MessageEvent& e) { return e.sender == node; }));
}

std::optional<double> contribution_index(std::uint64_t sent, std::uint64_t received) {
  if (sent + received == 0) return std::nullopt;
  return (static_cast<double>(sent) - static_cast<double>(received)) /
         (static_cast<double>(sent) + static_cast<double>(received));
}

std::optional<double> contribution_index(std::span<const MessageEvent> events, const NodeId& node,
                                         Channel link_rule) {
  const auto tally = tally_messages(events, link_rule);
  const auto it = tally.find(node);
  if (it == tally.end()) return std::nullopt;
  return contribution_index(it->second.sent, it->second.received);
}

PairingResult pair_responses(std::span<const MessageEvent> events, Duration horizon, Channel link_rule) {
  std::vector<const MessageEvent*> ordered;
  ordered.reserve(events.size());
  for (const MessageEvent& e : events) ordered.push_back(&e);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const MessageEvent* a, const MessageEvent* b) { return event_precedes(*a, *b); });

  const MessageAuthorIndex authors(events);
  std::unordered_map<NodeId, std::uint32_t> ids;
  std::vector<const NodeId*> names;
  auto intern = [&](const NodeId& id) {
    auto [it, inserted] = ids.emplace(id, static_cast<std::uint32_t>(names.size()));
    if (inserted) names.push_back(&it->first);
    return it->second;
  };
  auto key = [](std::uint32_t prompter, std::uint32_t responder) {
    return (static_cast<std::uint64_t>(prompter) << 32) | responder;
  };

  PairingResult result;
  std::unordered_map<std::uint64_t, std::deque<const MessageEvent*>> runs;

  for (const MessageEvent* e : ordered) {
    const std::uint32_t responder = intern(e->sender);
    for (const NodeId& target : induced_targets(*e, link_rule, authors)) {
      const std::uint32_t prompter = intern(target);
      bool answered = false;
      if (auto it = runs.find(key(prompter, responder)); it != runs.end() && !it->second.empty()) {
        auto& run = it->second;
        std::size_t expired = 0;
        while (!run.empty() && e->timestamp - run.front()->timestamp > horizon) {
          run.pop_front();
          ++expired;
        }
        if (expired > 0) result.open_runs.push_back(OpenRun{target, e->sender, expired, true});
        if (!run.empty()) {
          const MessageEvent* prompt = run.front();
          if (e->in_reply_to) {
            const auto linked = std::find_if(run.begin(), run.end(), [&](const MessageEvent* p) {
              return p->message_id == *e->in_reply_to;
            });
            if (linked != run.end()) prompt = *linked;
          }
          result.pairs.push_back(ResponsePair{prompt->message_id, e->message_id, target, e->sender,
                                              e->timestamp - prompt->timestamp, run.size()});
          run.clear();
          answered = true;
        }
      }
      if (!answered) {
        runs[key(responder, prompter)].push_back(e);
        ++result.prompt_messages;
      }
    }
  }

  std::vector<std::uint64_t> open_keys;
  for (const auto& [k, run] : runs) {
    if (!run.empty()) open_keys.push_back(k);
  }
  std::sort(open_keys.begin(), open_keys.end());
  for (const std::uint64_t k : open_keys) {
    result.open_runs.push_back(
        OpenRun{*names[k >> 32], *names[k & 0xFFFFFFFFu], runs[k].size(), false});
  }
  return result;
}

namespace {

std::optional<double> mean_if(std::span<const ResponsePair> pairs, auto&& pred, auto&& value) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const ResponsePair& p : pairs) {
    if (pred(p)) {
      sum += value(p);
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

double latency_seconds(const ResponsePair& p) { return static_cast<double>(p.latency.count()); }
double extra_pings(const ResponsePair& p) { return static_cast<double>(p.run_length - 1); }

}  // namespace

EgoAlter art(std::span<const ResponsePair> pairs, const NodeId& node) {
  return {mean_if(pairs, [&](const ResponsePair& p) { return p.responder == node; }, latency_seconds),
          mean_if(pairs, [&](const ResponsePair& p) { return p.prompter == node; }, latency_seconds)};
}

EgoAlter nudges(std::span<const ResponsePair> pairs, const NodeId& node) {
  return {mean_if(pairs, [&](const ResponsePair& p) { return p.prompter == node; }, extra_pings),
          mean_if(pairs, [&](const ResponsePair& p) { return p.responder == node; }, extra_pings)};
}

std::unordered_map<NodeId, InteractionMetrics> interaction_metrics(std::span<const ResponsePair> pairs) {
  struct Sums {
    double answered_latency = 0, prompted_latency = 0, sent_pings = 0, received_pings = 0;
    std::size_t answered = 0, prompted = 0;
  };
  std::unordered_map<NodeId, Sums> sums;
  for (const ResponsePair& p : pairs) {
    Sums& r = sums[p.responder];
    r.answered_latency += latency_seconds(p);
    r.received_pings += extra_pings(p);
    ++r.answered;
    Sums& q = sums[p.prompter];
    q.prompted_latency += latency_seconds(p);
    q.sent_pings += extra_pings(p);
    ++q.prompted;
  }
  std::unordered_map<NodeId, InteractionMetrics> out;
  out.reserve(sums.size());
  for (const auto& [node, s] : sums) {
    InteractionMetrics m;
    if (s.answered > 0) {
      m.ego_art = s.answered_latency / static_cast<double>(s.answered);
      m.alter_nudges = s.received_pings / static_cast<double>(s.answered);
    }
    if (s.prompted > 0) {
      m.alter_art = s.prompted_latency / static_cast<double>(s.prompted);
      m.ego_nudges = s.sent_pings / static_cast<double>(s.prompted);
    }
    out.emplace(node, m);
  }
  return out;
}

}  // namespace netstab

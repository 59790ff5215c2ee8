#include "netstab/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace netstab {

CommGraph CommGraph::from_arcs(Channel channel, std::vector<NodeId> nodes, std::vector<Arc> arcs,
                               BuildStats stats) {
  const std::size_t n = nodes.size();
  for (const Arc& a : arcs) {
    if (a.source >= n || a.target >= n) throw InputError("arc endpoint out of range");
    if (a.source == a.target) throw InputError("self-loop arc on " + nodes[a.source].str());
    if (a.weight == 0) throw InputError("zero-weight arc");
  }

  // Relabel so that node order is lexicographic.
  std::vector<NodeIndex> order(n);
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) { return nodes[a] < nodes[b]; });
  std::vector<NodeIndex> relabel(n);
  for (NodeIndex i = 0; i < n; ++i) relabel[order[i]] = i;

  CommGraph g;
  g.channel_ = channel;
  g.stats_ = stats;
  g.nodes_.reserve(n);
  for (NodeIndex old : order) g.nodes_.push_back(std::move(nodes[old]));
  g.index_.reserve(n);
  for (NodeIndex i = 0; i < n; ++i) {
    if (g.nodes_[i].empty()) throw InputError("empty node id");
    if (!g.index_.emplace(g.nodes_[i], i).second) {
      throw InputError("duplicate node id " + g.nodes_[i].str());
    }
  }

  for (Arc& a : arcs) {
    a.source = relabel[a.source];
    a.target = relabel[a.target];
  }
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  for (const Arc& a : arcs) {
    if (!g.arcs_.empty() && g.arcs_.back().source == a.source && g.arcs_.back().target == a.target) {
      Arc& merged = g.arcs_.back();
      merged.weight += a.weight;
      merged.first_seen = std::min(merged.first_seen, a.first_seen);
      merged.last_seen = std::max(merged.last_seen, a.last_seen);
    } else {
      g.arcs_.push_back(a);
    }
  }

  g.out_offsets_.assign(n + 1, 0);
  g.in_offsets_.assign(n + 1, 0);
  for (const Arc& a : g.arcs_) {
    ++g.out_offsets_[a.source + 1];
    ++g.in_offsets_[a.target + 1];
  }
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());
  g.out_targets_.resize(g.arcs_.size());
  g.in_sources_.resize(g.arcs_.size());
  std::vector<std::size_t> in_fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (std::size_t i = 0; i < g.arcs_.size(); ++i) {
    const Arc& a = g.arcs_[i];
    g.out_targets_[i] = a.target;  // arcs are sorted by source, so CSR order matches
    g.in_sources_[in_fill[a.target]++] = a.source;
  }
  return g;
}

std::optional<NodeIndex> CommGraph::find(const NodeId& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Arc* CommGraph::find_arc(NodeIndex source, NodeIndex target) const {
  if (source >= nodes_.size()) return nullptr;
  const auto targets = out_neighbors(source);
  const auto it = std::lower_bound(targets.begin(), targets.end(), target);
  if (it == targets.end() || *it != target) return nullptr;
  return &arcs_[out_offsets_[source] + static_cast<std::size_t>(it - targets.begin())];
}

std::vector<std::vector<NodeIndex>> CommGraph::undirected_adjacency() const {
  std::vector<std::vector<NodeIndex>> adj(nodes_.size());
  for (NodeIndex v = 0; v < nodes_.size(); ++v) {
    const auto out = out_neighbors(v);
    const auto in = in_neighbors(v);
    auto& list = adj[v];
    list.reserve(out.size() + in.size());
    std::set_union(out.begin(), out.end(), in.begin(), in.end(), std::back_inserter(list));
  }
  return adj;
}

std::uint64_t CommGraph::total_weight() const noexcept {
  std::uint64_t sum = 0;
  for (const Arc& a : arcs_) sum += a.weight;
  return sum;
}

MessageAuthorIndex::MessageAuthorIndex(std::span<const MessageEvent> events) {
  authors_.reserve(events.size());
  for (const MessageEvent& e : events) authors_.emplace(e.message_id, e.sender);
}

const NodeId* MessageAuthorIndex::author_of(const std::string& message_id) const {
  const auto it = authors_.find(message_id);
  return it == authors_.end() ? nullptr : &it->second;
}

std::vector<NodeId> induced_targets(const MessageEvent& event, Channel link_rule,
                                    const MessageAuthorIndex& authors, std::size_t* dangling,
                                    std::size_t* self_loops) {
  std::vector<NodeId> targets;
  auto add = [&](const NodeId& id) {
    if (id == event.sender) {
      if (self_loops) ++*self_loops;
      return;
    }
    if (std::find(targets.begin(), targets.end(), id) == targets.end()) targets.push_back(id);
  };
  for (const NodeId& r : event.recipients) add(r);
  if (link_rule == Channel::micropost) {
    for (const auto* ref : {&event.in_reply_to, &event.retweet_of}) {
      if (!ref->has_value()) continue;
      if (const NodeId* author = authors.author_of(**ref)) {
        add(*author);
      } else if (dangling) {
        ++*dangling;
      }
    }
  }
  return targets;
}

namespace {

struct Accumulator {
  std::uint64_t weight = 0;
  Timestamp first{Timestamp::max()};
  Timestamp last{Timestamp::min()};
};

}  // namespace

CommGraph build_graph(std::span<const MessageEvent> events, Channel link_rule) {
  return build_graph(events, link_rule, MessageAuthorIndex(events));
}

CommGraph build_graph(std::span<const MessageEvent> events, Channel link_rule,
                      const MessageAuthorIndex& authors) {
  std::vector<const MessageEvent*> ordered;
  ordered.reserve(events.size());
  for (const MessageEvent& e : events) ordered.push_back(&e);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const MessageEvent* a, const MessageEvent* b) { return event_precedes(*a, *b); });

  std::unordered_map<NodeId, NodeIndex> index;
  std::vector<NodeId> nodes;
  auto intern = [&](const NodeId& id) {
    auto [it, inserted] = index.emplace(id, static_cast<NodeIndex>(nodes.size()));
    if (inserted) nodes.push_back(id);
    return it->second;
  };

  BuildStats stats;
  std::map<std::pair<NodeIndex, NodeIndex>, Accumulator> pairs;
  for (const MessageEvent* e : ordered) {
    const NodeIndex s = intern(e->sender);
    // Every listed recipient is a node, even one whose arc turns out to be a self-loop.
    for (const NodeId& r : e->recipients) intern(r);
    for (const NodeId& t : induced_targets(*e, link_rule, authors, &stats.dangling_references,
                                           &stats.dropped_self_loops)) {
      Accumulator& acc = pairs[{s, intern(t)}];
      ++acc.weight;
      acc.first = std::min(acc.first, e->timestamp);
      acc.last = std::max(acc.last, e->timestamp);
    }
  }

  std::vector<Arc> arcs;
  arcs.reserve(pairs.size());
  for (const auto& [key, acc] : pairs) {
    arcs.push_back(Arc{key.first, key.second, acc.weight, acc.first, acc.last});
  }
  return CommGraph::from_arcs(link_rule, std::move(nodes), std::move(arcs), stats);
}

std::optional<TimeSpan> event_span(std::span<const MessageEvent> events) {
  if (events.empty()) return std::nullopt;
  TimeSpan span{events.front().timestamp, events.front().timestamp};
  for (const MessageEvent& e : events) {
    span.begin = std::min(span.begin, e.timestamp);
    span.end = std::max(span.end, e.timestamp);
  }
  return span;
}

SnapshotSeries window_slices(std::span<const MessageEvent> events, Duration window_length,
                             Channel link_rule, std::optional<TimeSpan> span) {
  if (window_length <= Duration::zero()) throw InputError("window length must be positive");
  SnapshotSeries series;
  series.window_length = window_length;
  if (!span) span = event_span(events);
  if (!span) return series;

  const auto length = (span->end - span->begin).count();
  const auto w = window_length.count();
  const std::size_t count = std::max<std::int64_t>(1, (length + w - 1) / w);

  std::vector<std::vector<MessageEvent>> buckets(count);
  for (const MessageEvent& e : events) {
    if (e.timestamp < span->begin || e.timestamp > span->end) continue;
    const auto offset = (e.timestamp - span->begin).count();
    const std::size_t k = std::min<std::size_t>(count - 1, static_cast<std::size_t>(offset / w));
    buckets[k].push_back(e);
  }

  // Reply/retweet links may point into earlier windows.
  const MessageAuthorIndex authors(events);
  series.windows.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Snapshot snap;
    snap.start = span->begin + window_length * static_cast<std::int64_t>(k);
    snap.end = k + 1 == count ? span->end : snap.start + window_length;
    snap.graph = build_graph(buckets[k], link_rule, authors);
    series.windows.push_back(std::move(snap));
  }
  return series;
}

namespace {

double median_of(std::vector<std::size_t> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return static_cast<double>(values[n / 2]);
  return (static_cast<double>(values[n / 2 - 1]) + static_cast<double>(values[n / 2])) / 2.0;
}

}  // namespace

DegreeSummary degree_summary(const CommGraph& graph) {
  if (graph.empty()) throw InputError("empty graph");
  const std::size_t n = graph.node_count();
  std::vector<std::size_t> total(n), out(n), in(n);
  for (NodeIndex v = 0; v < n; ++v) {
    out[v] = graph.out_degree(v);
    in[v] = graph.in_degree(v);
    total[v] = out[v] + in[v];
  }
  DegreeSummary s;
  s.min = *std::min_element(total.begin(), total.end());
  s.max = *std::max_element(total.begin(), total.end());
  s.min_out = *std::min_element(out.begin(), out.end());
  s.max_out = *std::max_element(out.begin(), out.end());
  s.min_in = *std::min_element(in.begin(), in.end());
  s.max_in = *std::max_element(in.begin(), in.end());
  s.median = median_of(total);
  s.median_out = median_of(out);
  s.median_in = median_of(in);
  if (s.median > 0) s.tail_ratio = static_cast<double>(s.max) / s.median;
  return s;
}

}  // namespace netstab

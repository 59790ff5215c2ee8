#include "netstab/removal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace netstab {

namespace {

double parse_percentile(std::string_view text, std::string_view plan) {
  double p = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !(p > 0.0 && p < 100.0)) {
    throw InputError("bad removal plan '" + std::string(plan) + "': percentile must lie in (0, 100)");
  }
  return p;
}

std::string format_percentile(double p) {
  std::ostringstream out;
  out << p;
  return out.str();
}

std::vector<NodeId> read_node_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read custom node list '" + path + "'");
  std::vector<NodeId> nodes;
  std::string line;
  while (std::getline(in, line)) {
    if (canonicalize_account(line).empty() || line.front() == '#') continue;
    nodes.emplace_back(line);
  }
  return nodes;
}

}  // namespace

RemovalPlan parse_plan(std::string_view text) {
  RemovalPlan plan;
  if (text == "spammers") {
    plan.kind = RemovalPlan::Kind::spammers;
  } else if (text == "bottom") {
    plan.kind = RemovalPlan::Kind::bottom;
  } else if (text == "spammers+bottom" || text == "bottom+spammers") {
    plan.kind = RemovalPlan::Kind::spammers_plus_bottom;
  } else if (text.starts_with("custom:")) {
    plan.kind = RemovalPlan::Kind::custom;
    plan.source = std::string(text.substr(7));
    plan.custom_nodes = read_node_list(plan.source);
  } else if (text.starts_with("top")) {
    std::string_view rest = text.substr(3);
    plan.kind = RemovalPlan::Kind::top_percentile;
    if (rest.ends_with("+bottom")) {
      rest.remove_suffix(7);
      plan.kind = RemovalPlan::Kind::top_percentile_plus_bottom;
    }
    plan.percentile = parse_percentile(rest, text);
  } else {
    throw InputError("unknown removal plan '" + std::string(text) +
                     "' (spammers | bottom | top<p> | top<p>+bottom | spammers+bottom | custom:<file>)");
  }
  return plan;
}

std::vector<RemovalPlan> parse_plan_list(std::string_view comma_separated) {
  std::vector<RemovalPlan> plans;
  std::size_t start = 0;
  while (start <= comma_separated.size()) {
    const std::size_t end = std::min(comma_separated.find(',', start), comma_separated.size());
    const std::string_view item = comma_separated.substr(start, end - start);
    if (!item.empty()) plans.push_back(parse_plan(item));
    start = end + 1;
  }
  if (plans.empty()) throw InputError("no removal plans given");
  return plans;
}

std::string plan_label(const RemovalPlan& plan) {
  switch (plan.kind) {
    case RemovalPlan::Kind::spammers: return "spammers";
    case RemovalPlan::Kind::bottom: return "bottom";
    case RemovalPlan::Kind::top_percentile: return "top" + format_percentile(plan.percentile);
    case RemovalPlan::Kind::top_percentile_plus_bottom:
      return "top" + format_percentile(plan.percentile) + "+bottom";
    case RemovalPlan::Kind::spammers_plus_bottom: return "spammers+bottom";
    case RemovalPlan::Kind::custom: return "custom:" + plan.source;
  }
  return "unknown";
}

std::vector<NodeIndex> bottom_nodes(const CommGraph& graph) {
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < graph.node_count(); ++v) {
    if (graph.degree(v) <= 1) out.push_back(v);
  }
  return out;
}

std::vector<NodeIndex> top_percentile_nodes(const CommGraph& graph, double percentile) {
  const std::size_t n = graph.node_count();
  if (n == 0) return {};
  std::vector<std::size_t> degrees(n);
  for (NodeIndex v = 0; v < n; ++v) degrees[v] = graph.degree(v);
  std::vector<std::size_t> sorted = degrees;
  std::sort(sorted.rbegin(), sorted.rend());
  // Guard against p*n/100 landing a hair above an integer.
  const double exact = percentile * static_cast<double>(n) / 100.0;
  std::size_t rank = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  const std::size_t cutoff = sorted[rank - 1];
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < n; ++v) {
    if (degrees[v] >= cutoff) out.push_back(v);
  }
  return out;
}

Selection select_nodes(const CommGraph& graph, const RemovalPlan& plan, const Classification* verdicts) {
  if (plan.needs_verdicts() && verdicts == nullptr) {
    throw InputError("plan '" + plan_label(plan) + "' needs spam verdicts");
  }
  Selection sel;
  auto add_spammers = [&] {
    for (const SpamVerdict& v : verdicts->verdicts) {
      if (!v.is_spammer) continue;
      if (const auto idx = graph.find(v.node)) sel.nodes.push_back(*idx);
    }
  };
  auto add = [&](const std::vector<NodeIndex>& nodes) { sel.nodes.insert(sel.nodes.end(), nodes.begin(), nodes.end()); };

  switch (plan.kind) {
    case RemovalPlan::Kind::spammers: add_spammers(); break;
    case RemovalPlan::Kind::bottom: add(bottom_nodes(graph)); break;
    case RemovalPlan::Kind::top_percentile: add(top_percentile_nodes(graph, plan.percentile)); break;
    case RemovalPlan::Kind::top_percentile_plus_bottom:
      add(top_percentile_nodes(graph, plan.percentile));
      add(bottom_nodes(graph));
      break;
    case RemovalPlan::Kind::spammers_plus_bottom:
      add_spammers();
      add(bottom_nodes(graph));
      break;
    case RemovalPlan::Kind::custom:
      for (const NodeId& id : plan.custom_nodes) {
        if (const auto idx = graph.find(id)) {
          sel.nodes.push_back(*idx);
        } else {
          sel.skipped.push_back(id);
        }
      }
      break;
  }
  std::sort(sel.nodes.begin(), sel.nodes.end());
  sel.nodes.erase(std::unique(sel.nodes.begin(), sel.nodes.end()), sel.nodes.end());
  return sel;
}

CommGraph remove_nodes(const CommGraph& graph, std::span<const NodeIndex> nodes) {
  const std::size_t n = graph.node_count();
  std::vector<bool> removed(n, false);
  for (const NodeIndex v : nodes) {
    if (v >= n) throw InputError("node index out of range in removal set");
    removed[v] = true;
  }
  std::vector<NodeIndex> relabel(n, 0);
  std::vector<NodeId> kept;
  for (NodeIndex v = 0; v < n; ++v) {
    if (removed[v]) continue;
    relabel[v] = static_cast<NodeIndex>(kept.size());
    kept.push_back(graph.node(v));
  }
  std::vector<Arc> arcs;
  for (const Arc& a : graph.arcs()) {
    if (removed[a.source] || removed[a.target]) continue;
    Arc copy = a;
    copy.source = relabel[a.source];
    copy.target = relabel[a.target];
    arcs.push_back(copy);
  }
  return CommGraph::from_arcs(graph.channel(), std::move(kept), std::move(arcs), graph.build_stats());
}

std::vector<MessageEvent> restrict_events(std::span<const MessageEvent> events, const CommGraph& graph,
                                          std::span<const NodeIndex> removed) {
  std::unordered_set<NodeId> gone;
  for (const NodeIndex v : removed) gone.insert(graph.node(v));
  std::vector<MessageEvent> out;
  out.reserve(events.size());
  for (const MessageEvent& e : events) {
    if (gone.contains(e.sender)) continue;
    MessageEvent copy = e;
    std::erase_if(copy.recipients, [&](const NodeId& r) { return gone.contains(r); });
    if (copy.channel == Channel::email && copy.recipients.empty() && !e.recipients.empty()) continue;
    out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace netstab

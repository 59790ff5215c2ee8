#include "netstab/spam.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <limits>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "netstab/ingest.hpp"
#include "netstab/metrics_node.hpp"

namespace netstab {

void SpamThresholds::validate() const {
  if (!(high_volume_percentile > 0.0 && high_volume_percentile <= 100.0)) {
    throw InputError("high-volume percentile must lie in (0, 100]");
  }
  if (!(follow_ratio > 1.0)) throw InputError("follow ratio must exceed 1");
  if (active_hour_bins < 1 || active_hour_bins > 24) throw InputError("active hour bins must lie in [1, 24]");
  if (!(url_fraction > 0.0)) throw InputError("url fraction must be positive");
  if (max_fixed_point_iters < 1) throw InputError("max fixed-point iterations must be >= 1");
}

int CriteriaSet::count(Channel channel) const {
  int n = has(Criterion::A) + has(Criterion::B) + has(Criterion::C);
  if (channel == Channel::micropost) n += has(Criterion::D);
  return n;
}

std::string CriteriaSet::to_string() const {
  std::string out;
  for (const auto& [c, name] : {std::pair{Criterion::A, 'A'}, std::pair{Criterion::B, 'B'},
                                std::pair{Criterion::C, 'C'}, std::pair{Criterion::D, 'D'}}) {
    if (!has(c)) continue;
    if (!out.empty()) out.push_back(';');
    out.push_back(name);
  }
  return out;
}

LabelTable parse_labels(std::istream& in) {
  LabelTable table;
  std::vector<std::string> fields;
  std::size_t line = 0;
  bool first = true;
  while (csv::read_record(in, fields, line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 2) throw InputError("labels line " + std::to_string(line) + ": expected node_id,label");
    const std::string label = canonicalize_account(fields[1]);
    if (first && canonicalize_account(fields[0]) == "node_id" && label == "label") {
      first = false;
      continue;
    }
    first = false;
    SpamLabel value;
    if (label == "spam") {
      value = SpamLabel::spam;
    } else if (label == "ham") {
      value = SpamLabel::ham;
    } else {
      throw InputError("labels line " + std::to_string(line) + ": label must be spam or ham");
    }
    table.labels[NodeId(fields[0])] = value;
  }
  return table;
}

LabelTable load_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read labels file '" + path.string() + "'");
  return parse_labels(in);
}

bool meets_spam_rule(CriteriaSet set, Channel channel) {
  return channel == Channel::email ? set.count(Channel::email) >= 2 : set.count(Channel::micropost) >= 3;
}

namespace {

bool has_link(std::string_view text) {
  return text.find("http://") != std::string_view::npos || text.find("https://") != std::string_view::npos ||
         text.find("www.") != std::string_view::npos;
}

std::uint64_t volume_cutoff_for(const std::vector<NodeSignals>& signals, double percentile) {
  if (percentile >= 100.0) return std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> sent;
  for (const NodeSignals& s : signals) {
    if (s.sent > 0) sent.push_back(s.sent);
  }
  std::sort(sent.begin(), sent.end());
  const double needed = percentile * static_cast<double>(sent.size()) / 100.0;
  // Smallest value with at least `needed` senders strictly below it.
  for (std::size_t i = 0; i < sent.size(); ++i) {
    if (i > 0 && sent[i] == sent[i - 1]) continue;
    if (static_cast<double>(i) >= needed) return sent[i];
  }
  return std::numeric_limits<std::uint64_t>::max();
}

bool satisfies_b(const CriteriaEvaluation& eval, NodeIndex v, const std::vector<bool>& spam,
                 std::uint64_t limit) {
  std::uint64_t received = 0;
  for (const auto& [sender, count] : eval.received_from[v]) {
    if (!spam[sender]) received += count;
  }
  return received <= limit;
}

}  // namespace

CriteriaEvaluation evaluate_criteria(std::span<const MessageEvent> events, const CommGraph& graph,
                                     const LabelTable* labels, const SpamThresholds& thresholds) {
  thresholds.validate();
  const std::size_t n = graph.node_count();
  CriteriaEvaluation eval;
  eval.channel = graph.channel();
  eval.signals.resize(n);
  eval.received_from.resize(n);
  for (NodeIndex v = 0; v < n; ++v) eval.signals[v].node = graph.node(v);

  const MessageAuthorIndex authors(events);
  std::vector<std::uint32_t> hour_mask(n, 0);
  std::vector<std::uint64_t> url_posts(n, 0);
  std::vector<std::map<NodeIndex, std::uint64_t>> received(n);
  for (const MessageEvent& e : events) {
    const auto s = graph.find(e.sender);
    if (!s) continue;
    NodeSignals& sig = eval.signals[*s];
    ++sig.sent;
    const auto since_midnight = e.timestamp - std::chrono::floor<std::chrono::days>(e.timestamp);
    hour_mask[*s] |= 1u << std::chrono::duration_cast<std::chrono::hours>(since_midnight).count();
    if (e.body_text && has_link(*e.body_text)) ++url_posts[*s];
    if (e.author_followers) sig.followers = e.author_followers;
    if (e.author_following) sig.following = e.author_following;
    for (const NodeId& t : induced_targets(e, graph.channel(), authors)) {
      if (const auto r = graph.find(t)) ++received[*r][*s];
    }
  }
  for (NodeIndex v = 0; v < n; ++v) {
    eval.received_from[v].assign(received[v].begin(), received[v].end());
    NodeSignals& sig = eval.signals[v];
    sig.active_hours = std::popcount(hour_mask[v]);
    sig.url_post_fraction = sig.sent ? static_cast<double>(url_posts[v]) / static_cast<double>(sig.sent) : 0.0;
  }
  if (labels) {
    for (const auto& [node, label] : labels->labels) {
      if (const auto v = graph.find(node)) {
        eval.signals[*v].label = label;
      } else {
        ++eval.unknown_labels;
      }
    }
  }

  eval.volume_cutoff = volume_cutoff_for(eval.signals, thresholds.high_volume_percentile);
  const bool volume_enabled = thresholds.high_volume_percentile < 100.0;
  eval.static_criteria.resize(n);
  eval.criteria.resize(n);
  const std::vector<bool> no_spam(n, false);
  for (NodeIndex v = 0; v < n; ++v) {
    const NodeSignals& sig = eval.signals[v];
    CriteriaSet set;
    bool a = volume_enabled && sig.sent > 0 && sig.sent >= eval.volume_cutoff;
    if (eval.channel == Channel::micropost && volume_enabled) {
      a = a || sig.active_hours >= thresholds.active_hour_bins;
    }
    set.set(Criterion::A, a);
    bool c = sig.label == SpamLabel::spam;
    if (eval.channel == Channel::micropost && sig.sent > 0) {
      c = c || sig.url_post_fraction >= thresholds.url_fraction;
    }
    set.set(Criterion::C, c);
    if (eval.channel == Channel::micropost && sig.following && sig.followers) {
      const double base = static_cast<double>(std::max<std::int64_t>(*sig.followers, 1));
      set.set(Criterion::D, static_cast<double>(*sig.following) >= thresholds.follow_ratio * base);
    }
    eval.static_criteria[v] = set;
    set.set(Criterion::B, satisfies_b(eval, v, no_spam, thresholds.min_received_nonspam));
    eval.criteria[v] = set;
  }
  return eval;
}

Classification classify(const CriteriaEvaluation& eval, const SpamThresholds& thresholds) {
  const std::size_t n = eval.signals.size();
  Classification out;
  out.verdicts.resize(n);
  for (NodeIndex v = 0; v < n; ++v) out.verdicts[v].node = eval.signals[v].node;

  std::vector<bool> spam(n, false);
  std::vector<CriteriaSet> previous(n);
  out.converged = false;
  for (int iteration = 1; iteration <= thresholds.max_fixed_point_iters; ++iteration) {
    std::vector<bool> next(n, false);
    for (NodeIndex v = 0; v < n; ++v) {
      CriteriaSet set = eval.static_criteria[v];
      set.set(Criterion::B, satisfies_b(eval, v, spam, thresholds.min_received_nonspam));
      if (iteration > 1 && set != previous[v]) out.verdicts[v].iteration_fixed = iteration;
      previous[v] = set;
      next[v] = meets_spam_rule(set, eval.channel);
    }
    out.iterations = iteration;
    out.history.push_back(next);
    // A full spam set cannot grow further.
    const bool stable = next == spam || std::all_of(next.begin(), next.end(), [](bool b) { return b; });
    spam = std::move(next);
    if (stable) {
      out.converged = true;
      break;
    }
  }
  for (NodeIndex v = 0; v < n; ++v) {
    out.verdicts[v].satisfied = previous[v];
    out.verdicts[v].is_spammer = spam[v];
  }
  return out;
}

Classification detect_spammers(std::span<const MessageEvent> events, const CommGraph& graph,
                               const LabelTable* labels, const SpamThresholds& thresholds) {
  return classify(evaluate_criteria(events, graph, labels, thresholds), thresholds);
}

std::vector<NodeId> ci_screen(std::span<const MessageEvent> events, const CommGraph& graph,
                              const SpamThresholds& thresholds) {
  const CriteriaEvaluation eval = evaluate_criteria(events, graph, nullptr, thresholds);
  const auto tally = tally_messages(events, graph.channel());
  std::vector<NodeId> out;
  for (const NodeSignals& sig : eval.signals) {
    if (sig.sent == 0 || sig.sent < eval.volume_cutoff) continue;
    const auto it = tally.find(sig.node);
    if (it == tally.end()) continue;
    const auto ci = contribution_index(it->second.sent, it->second.received);
    if (ci && *ci >= thresholds.ci_screen) out.push_back(sig.node);
  }
  return out;
}

void write_verdicts_csv(std::ostream& out, const Classification& classification) {
  out << "node_id,satisfied_criteria,is_spammer,iterations\n";
  for (const SpamVerdict& v : classification.verdicts) {
    out << csv::quote(v.node.str()) << ',' << v.satisfied.to_string() << ',' << (v.is_spammer ? "true" : "false")
        << ',' << v.iteration_fixed << '\n';
  }
}

}  // namespace netstab

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "netstab/graph.hpp"

namespace netstab {

/// Operational thresholds for the four spammer criteria:
///   A  high sending volume (and, for microposts, round-the-clock posting)
///   B  next to nothing received from accounts not already judged spam
///   C  content labelled spam (microposts: or mostly link-carrying posts)
///   D  following far more accounts than follow back (microposts only)
struct SpamThresholds {
  /// A node passes A when at least this percentage of senders sent strictly
  /// fewer messages than it. 100 disables A altogether.
  double high_volume_percentile = 99.0;
  std::uint64_t min_received_nonspam = 1;
  double follow_ratio = 10.0;
  int active_hour_bins = 20;
  double url_fraction = 0.8;
  double ci_screen = 0.8;
  int max_fixed_point_iters = 5;

  /// Throws InputError on out-of-range values.
  void validate() const;
};

enum class Criterion : std::uint8_t { A = 1, B = 2, C = 4, D = 8 };

class CriteriaSet {
public:
  constexpr CriteriaSet() = default;
  constexpr bool has(Criterion c) const { return (bits_ & static_cast<std::uint8_t>(c)) != 0; }
  constexpr void set(Criterion c, bool on = true) {
    bits_ = on ? (bits_ | static_cast<std::uint8_t>(c)) : (bits_ & ~static_cast<std::uint8_t>(c));
  }
  constexpr std::uint8_t bits() const { return bits_; }
  static constexpr CriteriaSet from_bits(std::uint8_t b) {
    CriteriaSet s;
    s.bits_ = b & 0x0F;
    return s;
  }
  int count(Channel channel) const;  // email ignores D
  std::string to_string() const;     // e.g. "A;B"
  friend bool operator==(CriteriaSet, CriteriaSet) = default;

private:
  std::uint8_t bits_ = 0;
};

enum class SpamLabel { spam, ham };

struct LabelTable {
  std::unordered_map<NodeId, SpamLabel> labels;
};

/// `node_id,label` CSV with label in {spam, ham}; header optional.
LabelTable parse_labels(std::istream& in);
LabelTable load_labels(const std::filesystem::path& path);

/// Per-node inputs that do not depend on the current spam set.
struct NodeSignals {
  NodeId node;
  std::uint64_t sent = 0;
  int active_hours = 0;           // distinct hour-of-day bins with a post
  double url_post_fraction = 0;   // microposts with a link / posts
  std::optional<std::int64_t> followers;
  std::optional<std::int64_t> following;
  std::optional<SpamLabel> label;
};

struct CriteriaEvaluation {
  Channel channel = Channel::email;
  std::vector<NodeSignals> signals;           // graph node order
  std::vector<CriteriaSet> static_criteria;   // A, C, D
  std::vector<CriteriaSet> criteria;          // A, C, D plus B given no spammers
  std::uint64_t volume_cutoff = 0;            // lowest sent count passing A's volume test
  std::size_t unknown_labels = 0;
  // Per receiving node: (sender index, messages) pairs, for recomputing B.
  std::vector<std::vector<std::pair<NodeIndex, std::uint64_t>>> received_from;
};

CriteriaEvaluation evaluate_criteria(std::span<const MessageEvent> events, const CommGraph& graph,
                                     const LabelTable* labels, const SpamThresholds& thresholds);

/// True when `set` meets the condition count for `channel`: at least two
/// of A, B, C for email, at least three of A..D for microposts.
bool meets_spam_rule(CriteriaSet set, Channel channel);

struct SpamVerdict {
  NodeId node;
  CriteriaSet satisfied;
  bool is_spammer = false;
  int iteration_fixed = 1;  // iteration after which this node's criteria stopped changing
};

struct Classification {
  std::vector<SpamVerdict> verdicts;  // graph node order
  int iterations = 0;
  bool converged = true;
  std::vector<std::vector<bool>> history;  // spam membership after each iteration
};

/// Fixed point over B: recompute "received from non-spammers" excluding the
/// current spam set until the set stops growing or the cap is hit.
Classification classify(const CriteriaEvaluation& evaluation, const SpamThresholds& thresholds);

Classification detect_spammers(std::span<const MessageEvent> events, const CommGraph& graph,
                               const LabelTable* labels, const SpamThresholds& thresholds);

/// Advisory list: defined CI >= ci_screen and sent >= the A volume cutoff.
std::vector<NodeId> ci_screen(std::span<const MessageEvent> events, const CommGraph& graph,
                              const SpamThresholds& thresholds);

void write_verdicts_csv(std::ostream& out, const Classification& classification);

}  // namespace netstab

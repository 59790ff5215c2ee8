#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "netstab/graph.hpp"

namespace netstab {

struct SynthConfig {
  std::size_t n = 2000;
  std::size_t m_attach = 3;
  double reciprocation_prob = 0.3;
  std::size_t spammer_count = 10;
  double spammer_volume_multiplier = 25.0;
  double reply_prob = 0.6;
  Duration reply_latency_mean = Duration{2 * 3600};
  double nudge_prob = 0.3;
  std::size_t max_nudges = 3;
  double threads_per_arc = 3.0;  // Poisson mean of conversations per arc
  Duration duration = Duration{90 * 86400};
  Timestamp start = Timestamp{Duration{1577836800}};  // 2020-01-01T00:00:00Z
  Channel channel = Channel::email;
  std::size_t vocabulary_size = 2000;
  double min_vocab_skew = 0.6;  // Zipf exponents of the per-author styles
  double max_vocab_skew = 1.6;
  double sentiment_word_rate = 0.08;
  std::uint64_t seed = 42;

  /// Throws InputError.
  void validate() const;
};

struct AuthorStyle {
  double valence_bias = 0.5;  // probability a sentiment word is positive
  double vocab_skew = 1.0;
  std::uint32_t active_hour = 0;  // start of the 8-hour daily activity band
};

struct GroundTruth {
  std::vector<NodeId> spammers;  // sorted
  std::vector<std::pair<NodeId, AuthorStyle>> styles;  // graph node order
  double reply_prob = 0;
  Duration reply_latency_mean{};
  std::size_t spam_messages_per_spammer = 0;

  bool is_spammer(const NodeId& node) const;
};

struct SynthStream {
  std::vector<MessageEvent> events;  // sorted by (timestamp, message_id)
  GroundTruth truth;
};

/// Directed preferential attachment with a (total degree + 1) kernel. Node
/// i attaches min(i, m_attach) distinct out-arcs; each arc is reciprocated
/// with reciprocation_prob.
CommGraph gen_scale_free(const SynthConfig& config);

/// Conversations over every arc between non-spammers, plus broadcast spam
/// from `spammer_count` planted accounts that never receive anything.
SynthStream gen_message_stream(const CommGraph& graph, const SynthConfig& config);

/// gen_scale_free followed by gen_message_stream.
SynthStream synthesize(const SynthConfig& config);

/// `node_id,label` with spam/ham, readable by load_labels.
void write_truth_csv(std::ostream& out, const CommGraph& graph, const GroundTruth& truth);

}  // namespace netstab

#include "netstab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <unordered_set>

#include "netstab/ingest.hpp"
#include "netstab/text.hpp"

namespace netstab {

namespace {

constexpr std::size_t kSkewLevels = 16;
constexpr std::int64_t kDay = 86400;

// Sampling is done by hand on top of mt19937_64 so streams are identical
// across standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  bool chance(double p) { return uniform() < p; }

  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  std::size_t poisson(double mean) {
    const double limit = std::exp(-mean);
    std::size_t k = 0;
    double p = uniform();
    while (p > limit) {
      ++k;
      p *= uniform();
    }
    return k;
  }

private:
  std::mt19937_64 engine_;
};

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string node_name(std::size_t i, std::size_t n) {
  int width = 5;
  for (std::size_t limit = 100000; limit < n; limit *= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof buf, "n%0*zu", width, i);
  return buf;
}

class TextModel {
public:
  TextModel(const SynthConfig& config) {
    static constexpr std::string_view consonants = "bdfgklmnprstvz";
    static constexpr std::string_view vowels = "aeiou";
    const Lexicon& lex = default_lexicon();
    for (std::size_t i = 0; vocab_.size() < config.vocabulary_size; ++i) {
      std::string word;
      std::size_t x = i;
      for (int s = 0; s < 3; ++s) {
        const std::size_t syllable = x % (consonants.size() * vowels.size());
        x /= consonants.size() * vowels.size();
        word.push_back(consonants[syllable / vowels.size()]);
        word.push_back(vowels[syllable % vowels.size()]);
      }
      if (lex.positive.contains(word) || lex.negative.contains(word)) continue;
      vocab_.push_back(std::move(word));
    }
    positive_.assign(lex.positive.begin(), lex.positive.end());
    negative_.assign(lex.negative.begin(), lex.negative.end());
    std::sort(positive_.begin(), positive_.end());
    std::sort(negative_.begin(), negative_.end());

    for (std::size_t level = 0; level < kSkewLevels; ++level) {
      const double s = skew(config, level);
      std::vector<double> cdf(vocab_.size());
      double total = 0;
      for (std::size_t r = 0; r < vocab_.size(); ++r) {
        total += std::pow(static_cast<double>(r + 1), -s);
        cdf[r] = total;
      }
      for (double& c : cdf) c /= total;
      cdfs_.push_back(std::move(cdf));
    }
  }

  static double skew(const SynthConfig& config, std::size_t level) {
    return config.min_vocab_skew +
           (config.max_vocab_skew - config.min_vocab_skew) * static_cast<double>(level) / (kSkewLevels - 1);
  }

  // Per-message noise: the style level jitters by one step and the valence
  // by up to 0.15 either way.
  std::string words(Rng& rng, std::size_t level, double valence, std::size_t count, double sentiment_rate) const {
    const auto jitter = static_cast<std::int64_t>(rng.below(3)) - 1;
    const auto lvl = static_cast<std::size_t>(
        std::clamp<std::int64_t>(static_cast<std::int64_t>(level) + jitter, 0, kSkewLevels - 1));
    const double v = std::clamp(valence + (rng.uniform() - 0.5) * 0.3, 0.0, 1.0);
    const std::vector<double>& cdf = cdfs_[lvl];
    std::string out;
    for (std::size_t i = 0; i < count; ++i) {
      if (i > 0) out.push_back(' ');
      if (rng.chance(sentiment_rate)) {
        const auto& pool = rng.chance(v) ? positive_ : negative_;
        out += pool[rng.below(pool.size())];
      } else {
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), rng.uniform());
        out += vocab_[std::min<std::size_t>(it - cdf.begin(), vocab_.size() - 1)];
      }
    }
    return out;
  }

private:
  std::vector<std::string> vocab_;
  std::vector<std::string> positive_;
  std::vector<std::string> negative_;
  std::vector<std::vector<double>> cdfs_;
};

struct Draft {
  Draft(std::int64_t at, NodeIndex source, NodeIndex target) : offset(at), from(source), to(target) {}

  std::int64_t offset = 0;  // seconds after config.start
  std::size_t seq = 0;
  NodeIndex from = 0;
  NodeIndex to = 0;
  std::optional<std::size_t> reply_to;  // seq of the prompt
  std::optional<std::string> subject;
  std::string body;
};

constexpr std::string_view kSpamWords[] = {"offer", "free", "bonus", "click", "deal", "cash",
                                           "prize", "win", "limited", "now", "exclusive", "cheap"};

std::string spam_text(Rng& rng, std::size_t count, bool with_link) {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0) out.push_back(' ');
    out += kSpamWords[rng.below(std::size(kSpamWords))];
  }
  if (with_link) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " https://promo%llu.example.com/offer",
                  static_cast<unsigned long long>(rng.below(1000)));
    out += buf;
  }
  return out;
}

}  // namespace

void SynthConfig::validate() const {
  if (m_attach < 1) throw InputError("synth: m_attach must be >= 1");
  if (n <= m_attach) throw InputError("synth: n must exceed m_attach");
  for (const double p : {reciprocation_prob, reply_prob, nudge_prob, sentiment_word_rate}) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("synth: probabilities must lie in [0, 1]");
  }
  if (!(spammer_volume_multiplier > 1.0)) throw InputError("synth: spammer volume multiplier must exceed 1");
  if (spammer_count > n) throw InputError("synth: more spammers than nodes");
  if (reply_latency_mean.count() <= 0) throw InputError("synth: reply latency mean must be positive");
  if (duration.count() <= 0) throw InputError("synth: duration must be positive");
  if (!(threads_per_arc >= 0.0 && threads_per_arc <= 50.0)) throw InputError("synth: threads per arc must lie in [0, 50]");
  if (vocabulary_size < 1) throw InputError("synth: vocabulary must be non-empty");
  if (!(min_vocab_skew > 0.0 && max_vocab_skew >= min_vocab_skew)) throw InputError("synth: bad vocabulary skew range");
}

bool GroundTruth::is_spammer(const NodeId& node) const {
  return std::binary_search(spammers.begin(), spammers.end(), node);
}

CommGraph gen_scale_free(const SynthConfig& config) {
  config.validate();
  Rng rng(stream_seed(config.seed, 0));
  std::vector<NodeId> nodes;
  nodes.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) nodes.emplace_back(node_name(i, config.n));

  std::vector<NodeIndex> urn;  // node v appears degree(v) + 1 times
  std::vector<Arc> arcs;
  std::unordered_set<std::uint64_t> seen;
  auto add_arc = [&](NodeIndex a, NodeIndex b) {
    if (!seen.insert((static_cast<std::uint64_t>(a) << 32) | b).second) return;
    arcs.push_back(Arc{a, b, 1, config.start, config.start});
    urn.push_back(a);
    urn.push_back(b);
  };
  std::vector<NodeIndex> chosen;
  for (NodeIndex v = 0; v < config.n; ++v) {
    const std::size_t k = std::min<std::size_t>(v, config.m_attach);
    chosen.clear();
    while (chosen.size() < k) {
      const NodeIndex w = urn[rng.below(urn.size())];
      if (std::find(chosen.begin(), chosen.end(), w) == chosen.end()) chosen.push_back(w);
    }
    urn.push_back(v);
    for (const NodeIndex w : chosen) {
      add_arc(v, w);
      if (rng.chance(config.reciprocation_prob)) add_arc(w, v);
    }
  }
  return CommGraph::from_arcs(config.channel, std::move(nodes), std::move(arcs));
}

SynthStream gen_message_stream(const CommGraph& graph, const SynthConfig& config) {
  config.validate();
  const std::size_t n = graph.node_count();
  if (config.spammer_count > n) throw InputError("synth: more spammers than nodes");
  Rng rng(stream_seed(config.seed, 1));
  const TextModel text(config);

  SynthStream out;
  GroundTruth& truth = out.truth;
  truth.reply_prob = config.reply_prob;
  truth.reply_latency_mean = config.reply_latency_mean;

  std::vector<std::size_t> levels(n);
  std::vector<AuthorStyle> styles(n);
  for (NodeIndex v = 0; v < n; ++v) {
    levels[v] = rng.below(kSkewLevels);
    styles[v].vocab_skew = TextModel::skew(config, levels[v]);
    styles[v].valence_bias = 0.15 + 0.7 * rng.uniform();
    styles[v].active_hour = static_cast<std::uint32_t>(rng.below(24));
    truth.styles.emplace_back(graph.node(v), styles[v]);
  }

  std::vector<NodeIndex> order(n);
  for (NodeIndex v = 0; v < n; ++v) order[v] = v;
  for (std::size_t i = 0; i < config.spammer_count; ++i) {
    std::swap(order[i], order[i + rng.below(n - i)]);
  }
  std::vector<bool> spammer(n, false);
  for (std::size_t i = 0; i < config.spammer_count; ++i) {
    spammer[order[i]] = true;
    truth.spammers.push_back(graph.node(order[i]));
  }
  std::sort(truth.spammers.begin(), truth.spammers.end());

  const bool email = config.channel == Channel::email;
  const std::int64_t days = std::max<std::int64_t>(1, config.duration.count() / kDay);
  const double latency_mean = static_cast<double>(config.reply_latency_mean.count());
  std::vector<Draft> drafts;
  std::vector<std::uint64_t> sent(n, 0);

  auto compose = [&](Draft& d) {
    const NodeIndex a = d.from;
    if (email) d.subject = text.words(rng, levels[a], styles[a].valence_bias, 3 + rng.below(6), config.sentiment_word_rate);
    d.body = text.words(rng, levels[a], styles[a].valence_bias, 20 + rng.below(41), config.sentiment_word_rate);
  };
  auto emit = [&](Draft d) {
    d.seq = drafts.size();
    ++sent[d.from];
    drafts.push_back(std::move(d));
    return drafts.back().seq;
  };

  // Conversations on one unordered pair never overlap, so every answered
  // run holds exactly the prompt and its nudges.
  struct Thread {
    std::int64_t start;
    NodeIndex from;
    NodeIndex to;
  };
  std::vector<Thread> threads;
  for (const Arc& arc : graph.arcs()) {
    const NodeIndex u = arc.source;
    const NodeIndex v = arc.target;
    if (spammer[u] || spammer[v]) continue;
    const bool has_reverse = graph.find_arc(v, u) != nullptr;
    if (has_reverse && v < u) continue;  // handled with the reverse arc
    threads.clear();
    for (const auto& [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
      if (a == v && !has_reverse) break;
      const std::size_t count = rng.poisson(config.threads_per_arc);
      for (std::size_t t = 0; t < count; ++t) {
        const std::int64_t hour = (styles[a].active_hour + rng.below(8)) % 24;
        const std::int64_t t0 = static_cast<std::int64_t>(rng.below(days)) * kDay + hour * 3600 +
                                static_cast<std::int64_t>(rng.below(3600));
        threads.push_back({t0, a, b});
      }
    }
    std::stable_sort(threads.begin(), threads.end(),
                     [](const Thread& x, const Thread& y) { return x.start < y.start; });

    std::int64_t free_at = 0;
    for (const Thread& th : threads) {
      const std::int64_t t0 = std::max(th.start, free_at);
      Draft prompt(t0, th.from, th.to);
      compose(prompt);
      const std::size_t root = emit(std::move(prompt));

      std::size_t pings = 0;
      while (pings < config.max_nudges && rng.chance(config.nudge_prob)) ++pings;
      const bool replied = rng.chance(config.reply_prob);
      const auto latency = std::max<std::int64_t>(1, std::llround(rng.exponential(latency_mean)));

      std::vector<std::int64_t> ping_times;
      std::int64_t last = t0;
      if (replied) {
        for (std::size_t p = 0; p < pings; ++p) {
          ping_times.push_back(t0 + 1 + static_cast<std::int64_t>(rng.below(std::max<std::int64_t>(latency - 1, 1))));
        }
      } else {
        std::int64_t at = t0;
        for (std::size_t p = 0; p < pings; ++p) {
          at += std::max<std::int64_t>(1, std::llround(rng.exponential(latency_mean)));
          ping_times.push_back(at);
        }
      }
      std::sort(ping_times.begin(), ping_times.end());
      for (const std::int64_t at : ping_times) {
        Draft nudge(at, th.from, th.to);
        compose(nudge);
        emit(std::move(nudge));
        last = at;
      }
      if (replied) {
        last = std::max(t0 + latency, last + 1);
        Draft reply(last, th.to, th.from);
        reply.reply_to = root;
        compose(reply);
        emit(std::move(reply));
      }
      free_at = last + 1;
    }
  }

  std::vector<NodeIndex> legit;
  std::vector<std::uint64_t> legit_sent;
  for (NodeIndex v = 0; v < n; ++v) {
    if (spammer[v]) continue;
    legit.push_back(v);
    legit_sent.push_back(sent[v]);
  }
  if (config.spammer_count > 0 && !legit.empty()) {
    std::sort(legit_sent.begin(), legit_sent.end());
    const std::size_t mid = legit_sent.size() / 2;
    const double median = legit_sent.size() % 2 ? static_cast<double>(legit_sent[mid])
                                                 : 0.5 * static_cast<double>(legit_sent[mid - 1] + legit_sent[mid]);
    const auto volume = std::max<std::uint64_t>(1, std::llround(config.spammer_volume_multiplier * std::max(median, 1.0)));
    truth.spam_messages_per_spammer = volume;
    for (std::size_t i = 0; i < config.spammer_count; ++i) {
      const NodeIndex s = order[i];
      for (std::uint64_t k = 0; k < volume; ++k) {
        const auto at = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(config.duration.count())));
        Draft spam(at, s, legit[rng.below(legit.size())]);
        if (email) spam.subject = spam_text(rng, 3 + rng.below(4), false);
        spam.body = spam_text(rng, 10 + rng.below(20), true);
        emit(std::move(spam));
      }
    }
  }

  std::vector<std::int64_t> followers(n), following(n);
  if (!email) {
    for (NodeIndex v = 0; v < n; ++v) {
      if (spammer[v]) {
        followers[v] = static_cast<std::int64_t>(rng.below(6));
        following[v] = 800 + static_cast<std::int64_t>(rng.below(1200));
      } else {
        followers[v] = 10 + 3 * static_cast<std::int64_t>(graph.in_degree(v)) + static_cast<std::int64_t>(rng.below(20));
        following[v] = 10 + 3 * static_cast<std::int64_t>(graph.out_degree(v)) + static_cast<std::int64_t>(rng.below(20));
      }
    }
  }

  std::vector<std::size_t> rank(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) rank[i] = i;
  std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    return drafts[a].offset != drafts[b].offset ? drafts[a].offset < drafts[b].offset : a < b;
  });
  const std::size_t width = std::max<std::size_t>(7, std::to_string(drafts.size()).size());
  std::vector<std::string> ids(drafts.size());
  for (std::size_t r = 0; r < rank.size(); ++r) {
    const std::string digits = std::to_string(r);
    ids[rank[r]] = "m" + std::string(width - digits.size(), '0') + digits;
  }

  out.events.reserve(drafts.size());
  for (const std::size_t i : rank) {
    Draft& d = drafts[i];
    MessageEvent e;
    e.message_id = ids[i];
    e.timestamp = config.start + Duration{d.offset};
    e.sender = graph.node(d.from);
    e.recipients.push_back(graph.node(d.to));
    e.channel = config.channel;
    if (d.reply_to) e.in_reply_to = ids[*d.reply_to];
    e.subject_text = std::move(d.subject);
    e.body_text = std::move(d.body);
    if (!email) {
      e.author_followers = followers[d.from];
      e.author_following = following[d.from];
    }
    out.events.push_back(std::move(e));
  }
  return out;
}

SynthStream synthesize(const SynthConfig& config) {
  return gen_message_stream(gen_scale_free(config), config);
}

void write_truth_csv(std::ostream& out, const CommGraph& graph, const GroundTruth& truth) {
  out << "node_id,label\n";
  for (const NodeId& node : graph.nodes()) {
    out << csv::quote(node.str()) << ',' << (truth.is_spammer(node) ? "spam" : "ham") << '\n';
  }
}

}  // namespace netstab

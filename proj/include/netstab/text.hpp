#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "netstab/stats.hpp"
#include "netstab/types.hpp"

namespace netstab {

/// Lowercase ASCII, split on anything that is not a letter or digit. Bytes
/// >= 0x80 are kept inside tokens so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

struct Lexicon {
  std::unordered_set<std::string> positive;
  std::unordered_set<std::string> negative;
};

/// `[positive]` / `[negative]` sections, one token per line; blank lines
/// and lines starting with '#' are ignored.
Lexicon parse_lexicon(std::istream& in);
Lexicon load_lexicon(const std::filesystem::path& path);
/// The lexicon shipped as data/default.lex, compiled in.
const Lexicon& default_lexicon();

class SentimentScorer {
public:
  virtual ~SentimentScorer() = default;
  /// Score in [0, 1]; 0.5 is neutral.
  virtual double score(std::string_view text) const = 0;
  virtual std::string name() const = 0;
};

/// 0.5 + 0.5 (pos - neg) / max(pos + neg, 1) over token hits.
class LexiconScorer final : public SentimentScorer {
public:
  explicit LexiconScorer(Lexicon lexicon, std::string name = "lexicon:default");
  double score(std::string_view text) const override;
  std::string name() const override { return name_; }

private:
  Lexicon lexicon_;
  std::string name_;
};

class ConstantScorer final : public SentimentScorer {
public:
  explicit ConstantScorer(double value = 0.5) : value_(value) {}
  double score(std::string_view) const override { return value_; }
  std::string name() const override;

private:
  double value_;
};

double sentiment(std::string_view text, const SentimentScorer& scorer);

/// 2 |s - 0.5|.
double message_emotionality(double sentiment_value);
/// Mean of message_emotionality; absent for an empty list.
std::optional<double> emotionality(std::span<const double> sentiment_values);

/// Unigram model over the analyzed corpus with add-one smoothing:
/// p(w) = (c(w) + 1) / (N + V).
class CorpusModel {
public:
  void add_text(std::string_view text);
  void add_tokens(std::span<const std::string> tokens);

  std::uint64_t count(const std::string& token) const;
  std::uint64_t total_tokens() const noexcept { return total_; }
  std::size_t vocabulary_size() const noexcept { return counts_.size(); }
  double probability(const std::string& token) const;
  /// -log2 p(w), in bits.
  double surprisal(const std::string& token) const;

private:
  std::unordered_map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Mean per-token surprisal in bits; absent when the text has no tokens.
std::optional<double> complexity(std::string_view text, const CorpusModel& model);
std::vector<double> token_probabilities(std::string_view text, const CorpusModel& model);

/// Text a message contributes to author-level semantics: the body when
/// present, else the subject.
std::optional<std::string_view> message_text(const MessageEvent& event);

/// Corpus model over every subject and body in the stream.
CorpusModel build_corpus_model(std::span<const MessageEvent> events);

struct AuthorSemantics {
  std::optional<double> sentiment;
  std::optional<double> emotionality;
  std::optional<double> emotionality_var;  // variance of message sentiment
  std::optional<double> complexity;
};

/// Means over each author's messages (message_text), with the corpus model
/// built from the same stream.
std::unordered_map<NodeId, AuthorSemantics> author_semantics(std::span<const MessageEvent> events,
                                                             const SentimentScorer& scorer);

inline constexpr std::array<const char*, 6> kSemanticVariables = {
    "body_sentiment",  "subject_sentiment",    "body_complexity",
    "subject_complexity", "body_emotionality", "subject_emotionality"};

struct CorrelationMatrix {
  std::size_t n = 0;  // qualifying rows
  bool present = false;
  std::array<std::array<std::optional<double>, 6>, 6> r{};
  std::array<std::array<std::optional<double>, 6>, 6> p_value{};
  std::array<std::array<std::size_t, 6>, 6> n_pairs{};
  std::vector<std::string> flags;
};

struct SemanticReport {
  CorrelationMatrix email_level;
  CorrelationMatrix author_level;
  std::string scorer;
  std::size_t min_author_messages = 3;
};

/// Body vs. subject semantics. Email level: every email with both a
/// subject and a body. Author level: per-author means over authors with at
/// least `min_author_messages` such emails.
SemanticReport subject_body_correlation(std::span<const MessageEvent> events, const SentimentScorer& scorer,
                                        const CorpusModel& model, std::size_t min_author_messages = 3);

}  // namespace netstab

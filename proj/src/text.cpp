#include "netstab/text.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

namespace netstab {

extern const char* const kDefaultLexiconText;  // generated from data/default.lex

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80) {
      current.push_back(ch);
    } else if (c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Lexicon parse_lexicon(std::istream& in) {
  Lexicon lex;
  std::unordered_set<std::string>* section = nullptr;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const std::string entry = line.substr(start);
    if (entry == "[positive]") {
      section = &lex.positive;
    } else if (entry == "[negative]") {
      section = &lex.negative;
    } else if (section == nullptr) {
      throw InputError("lexicon line " + std::to_string(line_no) + ": token outside a section");
    } else {
      const auto tokens = tokenize(entry);
      if (tokens.size() != 1) {
        throw InputError("lexicon line " + std::to_string(line_no) + ": expected a single token");
      }
      section->insert(tokens.front());
    }
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read lexicon '" + path.string() + "'");
  return parse_lexicon(in);
}

const Lexicon& default_lexicon() {
  static const Lexicon lex = [] {
    std::istringstream in(kDefaultLexiconText);
    return parse_lexicon(in);
  }();
  return lex;
}

LexiconScorer::LexiconScorer(Lexicon lexicon, std::string name)
    : lexicon_(std::move(lexicon)), name_(std::move(name)) {}

double LexiconScorer::score(std::string_view text) const {
  long positive = 0, negative = 0;
  for (const std::string& token : tokenize(text)) {
    if (lexicon_.positive.contains(token)) ++positive;
    if (lexicon_.negative.contains(token)) ++negative;
  }
  const long hits = std::max(positive + negative, 1L);
  return 0.5 + 0.5 * static_cast<double>(positive - negative) / static_cast<double>(hits);
}

std::string ConstantScorer::name() const {
  std::ostringstream out;
  out << "constant:" << value_;
  return out.str();
}

double sentiment(std::string_view text, const SentimentScorer& scorer) {
  return std::clamp(scorer.score(text), 0.0, 1.0);
}

double message_emotionality(double sentiment_value) { return 2.0 * std::abs(sentiment_value - 0.5); }

std::optional<double> emotionality(std::span<const double> sentiment_values) {
  if (sentiment_values.empty()) return std::nullopt;
  double sum = 0.0;
  for (const double s : sentiment_values) sum += message_emotionality(s);
  return sum / static_cast<double>(sentiment_values.size());
}

void CorpusModel::add_text(std::string_view text) {
  const auto tokens = tokenize(text);
  add_tokens(tokens);
}

void CorpusModel::add_tokens(std::span<const std::string> tokens) {
  for (const std::string& t : tokens) ++counts_[t];
  total_ += tokens.size();
}

std::uint64_t CorpusModel::count(const std::string& token) const {
  const auto it = counts_.find(token);
  return it == counts_.end() ? 0 : it->second;
}

double CorpusModel::probability(const std::string& token) const {
  return static_cast<double>(count(token) + 1) / static_cast<double>(total_ + counts_.size());
}

double CorpusModel::surprisal(const std::string& token) const {
  // Clamp the -0.0 of a certain token.
  return std::max(0.0, -std::log2(probability(token)));
}

std::optional<double> complexity(std::string_view text, const CorpusModel& model) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) return std::nullopt;
  double sum = 0.0;
  for (const std::string& t : tokens) sum += model.surprisal(t);
  return sum / static_cast<double>(tokens.size());
}

std::vector<double> token_probabilities(std::string_view text, const CorpusModel& model) {
  std::vector<double> out;
  for (const std::string& t : tokenize(text)) out.push_back(model.probability(t));
  return out;
}

std::optional<std::string_view> message_text(const MessageEvent& event) {
  if (event.body_text && !event.body_text->empty()) return *event.body_text;
  if (event.subject_text && !event.subject_text->empty()) return *event.subject_text;
  return std::nullopt;
}

CorpusModel build_corpus_model(std::span<const MessageEvent> events) {
  CorpusModel model;
  for (const MessageEvent& e : events) {
    if (e.subject_text) model.add_text(*e.subject_text);
    if (e.body_text) model.add_text(*e.body_text);
  }
  return model;
}

namespace {

struct Running {
  double sum = 0.0;
  std::size_t n = 0;
  void add(double x) {
    sum += x;
    ++n;
  }
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

}  // namespace

std::unordered_map<NodeId, AuthorSemantics> author_semantics(std::span<const MessageEvent> events,
                                                             const SentimentScorer& scorer) {
  const CorpusModel model = build_corpus_model(events);
  struct Acc {
    std::vector<double> sentiments;
    Running complexity;
  };
  std::unordered_map<NodeId, Acc> per_author;
  for (const MessageEvent& e : events) {
    const auto text = message_text(e);
    if (!text) continue;
    Acc& acc = per_author[e.sender];
    acc.sentiments.push_back(sentiment(*text, scorer));
    if (const auto c = complexity(*text, model)) acc.complexity.add(*c);
  }
  std::unordered_map<NodeId, AuthorSemantics> out;
  out.reserve(per_author.size());
  for (const auto& [author, acc] : per_author) {
    AuthorSemantics s;
    Running mean_sentiment;
    for (const double v : acc.sentiments) mean_sentiment.add(v);
    s.sentiment = mean_sentiment.mean();
    s.emotionality = emotionality(acc.sentiments);
    if (s.sentiment) {
      double var = 0.0;
      for (const double v : acc.sentiments) var += (v - *s.sentiment) * (v - *s.sentiment);
      s.emotionality_var = var / static_cast<double>(acc.sentiments.size());
    }
    s.complexity = acc.complexity.mean();
    out.emplace(author, s);
  }
  return out;
}

namespace {

using Row = std::array<std::optional<double>, 6>;

Row semantic_row(const MessageEvent& e, const SentimentScorer& scorer, const CorpusModel& model) {
  const double body_s = sentiment(*e.body_text, scorer);
  const double subject_s = sentiment(*e.subject_text, scorer);
  return Row{body_s,
             subject_s,
             complexity(*e.body_text, model),
             complexity(*e.subject_text, model),
             message_emotionality(body_s),
             message_emotionality(subject_s)};
}

CorrelationMatrix correlation_matrix(const std::vector<Row>& rows) {
  CorrelationMatrix m;
  m.n = rows.size();
  if (rows.size() < 3) {
    m.flags.emplace_back("fewer than 3 qualifying rows");
    return m;
  }
  m.present = true;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      std::vector<std::optional<double>> x, y;
      x.reserve(rows.size());
      y.reserve(rows.size());
      for (const Row& row : rows) {
        x.push_back(row[i]);
        y.push_back(row[j]);
      }
      const CorrelationResult c = correlate(x, y);
      m.r[i][j] = m.r[j][i] = c.pearson_r;
      m.p_value[i][j] = m.p_value[j][i] = c.p_value;
      m.n_pairs[i][j] = m.n_pairs[j][i] = c.n_pairs;
      for (const std::string& flag : c.flags) {
        m.flags.push_back(std::string(kSemanticVariables[i]) + " x " + kSemanticVariables[j] + ": " + flag);
      }
    }
  }
  return m;
}

}  // namespace

SemanticReport subject_body_correlation(std::span<const MessageEvent> events, const SentimentScorer& scorer,
                                        const CorpusModel& model, std::size_t min_author_messages) {
  SemanticReport report;
  report.scorer = scorer.name();
  report.min_author_messages = min_author_messages;

  std::vector<Row> email_rows;
  std::map<NodeId, std::vector<Row>> by_author;
  for (const MessageEvent& e : events) {
    if (e.channel != Channel::email || !e.subject_text || !e.body_text) continue;
    email_rows.push_back(semantic_row(e, scorer, model));
    by_author[e.sender].push_back(email_rows.back());
  }

  std::vector<Row> author_rows;
  for (const auto& [author, rows] : by_author) {
    if (rows.size() < min_author_messages) continue;
    Row mean;
    for (std::size_t k = 0; k < 6; ++k) {
      Running acc;
      for (const Row& r : rows) {
        if (r[k]) acc.add(*r[k]);
      }
      mean[k] = acc.mean();
    }
    author_rows.push_back(mean);
  }

  report.email_level = correlation_matrix(email_rows);
  report.author_level = correlation_matrix(author_rows);
  return report;
}

}  // namespace netstab

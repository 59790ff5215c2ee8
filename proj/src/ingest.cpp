#include "netstab/ingest.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace netstab {

InputFormat parse_input_format(std::string_view text) {
  if (text == "email" || text == "email_csv") return InputFormat::email_csv;
  if (text == "micropost" || text == "micropost_jsonl") return InputFormat::micropost_jsonl;
  throw InputError("unknown input format '" + std::string(text) + "' (email_csv | micropost_jsonl)");
}

Channel channel_of(InputFormat format) {
  return format == InputFormat::email_csv ? Channel::email : Channel::micropost;
}

namespace csv {

bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  int c = in.get();
  if (c == std::char_traits<char>::eof()) return false;
  ++line;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  for (;; c = in.get()) {
    if (c == std::char_traits<char>::eof()) {
      fields.push_back(std::move(field));
      return true;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && field.empty() && !field_was_quoted) {
      quoted = true;
      field_was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (ch == '\r' && in.peek() == '\n') {
      // swallow; the newline ends the record
    } else if (ch == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
  }
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace csv

namespace {

const char* const kEmailHeader[] = {"message_id", "timestamp", "sender", "recipients",
                                    "in_reply_to", "subject", "body"};

std::optional<std::string> non_empty(std::string s) {
  if (s.empty()) return std::nullopt;
  return s;
}

std::vector<NodeId> split_recipients(const std::string& field) {
  std::vector<NodeId> out;
  std::size_t start = 0;
  while (start <= field.size()) {
    const std::size_t end = std::min(field.find(';', start), field.size());
    const std::string_view part(field.data() + start, end - start);
    if (!canonicalize_account(part).empty()) {
      NodeId id(part);
      if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(std::move(id));
    }
    start = end + 1;
  }
  return out;
}

class RowSink {
public:
  RowSink(IngestResult& result, const IngestOptions& options) : result_(result), options_(options) {}

  void reject(std::size_t line, std::string reason) {
    result_.rejects.push_back(Reject{line, std::move(reason)});
  }

  // Returns a reason string when the event is not acceptable.
  std::optional<std::string> accept(MessageEvent event) {
    if (event.message_id.empty()) return "empty message_id";
    if (event.timestamp < options_.earliest || event.timestamp > options_.latest) {
      return "timestamp outside configured bounds";
    }
    if (!seen_.insert(event.message_id).second) return "duplicate message_id " + event.message_id;
    result_.events.push_back(std::move(event));
    return std::nullopt;
  }

private:
  IngestResult& result_;
  const IngestOptions& options_;
  std::unordered_set<std::string> seen_;
};

void parse_email(std::istream& in, IngestResult& result, const IngestOptions& options) {
  RowSink sink(result, options);
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!csv::read_record(in, fields, line)) return;
  bool header_ok = fields.size() == std::size(kEmailHeader);
  for (std::size_t i = 0; header_ok && i < fields.size(); ++i) {
    header_ok = canonicalize_account(fields[i]) == kEmailHeader[i];
  }
  if (!header_ok) {
    throw InputError("email_csv header must be message_id,timestamp,sender,recipients,in_reply_to,subject,body");
  }

  while (true) {
    const std::size_t record_line = line + 1;
    if (!csv::read_record(in, fields, line)) break;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    ++result.rows;
    if (fields.size() != std::size(kEmailHeader)) {
      sink.reject(record_line, "expected 7 fields, found " + std::to_string(fields.size()));
      continue;
    }
    MessageEvent e;
    e.channel = Channel::email;
    e.message_id = fields[0];
    const auto ts = parse_timestamp(fields[1]);
    if (!ts) {
      sink.reject(record_line, "unparseable timestamp '" + fields[1] + "'");
      continue;
    }
    e.timestamp = *ts;
    try {
      e.sender = NodeId(fields[2]);
      e.recipients = split_recipients(fields[3]);
    } catch (const InputError& err) {
      sink.reject(record_line, err.what());
      continue;
    }
    if (e.recipients.empty()) {
      sink.reject(record_line, "email without recipients");
      continue;
    }
    e.in_reply_to = non_empty(fields[4]);
    e.subject_text = non_empty(fields[5]);
    e.body_text = non_empty(fields[6]);
    if (auto why = sink.accept(std::move(e))) sink.reject(record_line, *why);
  }
}

std::optional<std::string> optional_string(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return non_empty(it->get<std::string>());
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  throw InputError(std::string("field '") + key + "' must be a string or null");
}

std::optional<std::int64_t> optional_count(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) throw InputError(std::string("field '") + key + "' must be an integer or null");
  const auto v = it->get<std::int64_t>();
  if (v < 0) throw InputError(std::string("field '") + key + "' must be non-negative");
  return v;
}

void parse_micropost(std::istream& in, IngestResult& result, const IngestOptions& options) {
  RowSink sink(result, options);
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    ++result.rows;
    try {
      const auto obj = nlohmann::json::parse(text);
      if (!obj.is_object()) throw InputError("line is not a JSON object");
      MessageEvent e;
      e.channel = Channel::micropost;
      const auto id = optional_string(obj, "id");
      if (!id) throw InputError("missing id");
      e.message_id = *id;
      const auto created = optional_string(obj, "created_at");
      const auto ts = created ? parse_timestamp(*created) : std::nullopt;
      if (!ts) throw InputError("unparseable created_at");
      e.timestamp = *ts;
      const auto author = optional_string(obj, "author");
      if (!author) throw InputError("missing author");
      e.sender = NodeId(*author);
      if (const auto it = obj.find("mentions"); it != obj.end() && !it->is_null()) {
        if (!it->is_array()) throw InputError("mentions must be an array");
        for (const auto& m : *it) {
          if (!m.is_string()) throw InputError("mentions must hold strings");
          NodeId id_m(m.get<std::string>());
          if (std::find(e.recipients.begin(), e.recipients.end(), id_m) == e.recipients.end()) {
            e.recipients.push_back(std::move(id_m));
          }
        }
      }
      e.body_text = optional_string(obj, "text");
      e.in_reply_to = optional_string(obj, "in_reply_to");
      e.retweet_of = optional_string(obj, "retweet_of");
      e.author_followers = optional_count(obj, "author_followers");
      e.author_following = optional_count(obj, "author_following");
      if (auto why = sink.accept(std::move(e))) sink.reject(line, *why);
    } catch (const nlohmann::json::exception& err) {
      sink.reject(line, std::string("invalid JSON: ") + err.what());
    } catch (const InputError& err) {
      sink.reject(line, err.what());
    }
  }
}

}  // namespace

IngestResult ingest(std::istream& in, InputFormat format, const IngestOptions& options) {
  IngestResult result;
  if (format == InputFormat::email_csv) {
    parse_email(in, result, options);
  } else {
    parse_micropost(in, result, options);
  }
  sort_events(result.events);
  if (result.rows >= options.min_rows_for_abort && result.rows > 0) {
    const double fraction = static_cast<double>(result.rejects.size()) / static_cast<double>(result.rows);
    if (fraction > options.max_reject_fraction) {
      std::ostringstream msg;
      msg << result.rejects.size() << " of " << result.rows << " rows malformed (limit "
          << options.max_reject_fraction * 100 << "%); first at line " << result.rejects.front().line
          << ": " << result.rejects.front().reason;
      throw IngestError(msg.str(), std::move(result));
    }
  }
  return result;
}

IngestResult ingest(const std::filesystem::path& path, InputFormat format, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read input file '" + path.string() + "'");
  return ingest(in, format, options);
}

void write_email_csv(std::ostream& out, std::span<const MessageEvent> events) {
  out << "message_id,timestamp,sender,recipients,in_reply_to,subject,body\n";
  for (const MessageEvent& e : events) {
    std::string recipients;
    for (std::size_t i = 0; i < e.recipients.size(); ++i) {
      if (i) recipients.push_back(';');
      recipients += e.recipients[i].str();
    }
    out << csv::quote(e.message_id) << ',' << format_timestamp(e.timestamp) << ','
        << csv::quote(e.sender.str()) << ',' << csv::quote(recipients) << ','
        << csv::quote(e.in_reply_to.value_or("")) << ',' << csv::quote(e.subject_text.value_or(""))
        << ',' << csv::quote(e.body_text.value_or("")) << '\n';
  }
}

void write_micropost_jsonl(std::ostream& out, std::span<const MessageEvent> events) {
  for (const MessageEvent& e : events) {
    nlohmann::ordered_json obj;
    obj["id"] = e.message_id;
    obj["created_at"] = format_timestamp(e.timestamp);
    obj["author"] = e.sender.str();
    obj["text"] = e.body_text.value_or("");
    auto mentions = nlohmann::ordered_json::array();
    for (const NodeId& m : e.recipients) mentions.push_back(m.str());
    obj["mentions"] = std::move(mentions);
    obj["in_reply_to"] = e.in_reply_to ? nlohmann::ordered_json(*e.in_reply_to) : nullptr;
    obj["retweet_of"] = e.retweet_of ? nlohmann::ordered_json(*e.retweet_of) : nullptr;
    obj["author_followers"] = e.author_followers ? nlohmann::ordered_json(*e.author_followers) : nullptr;
    obj["author_following"] = e.author_following ? nlohmann::ordered_json(*e.author_following) : nullptr;
    out << obj.dump() << '\n';
  }
}

void write_events(std::ostream& out, std::span<const MessageEvent> events, InputFormat format) {
  if (format == InputFormat::email_csv) {
    write_email_csv(out, events);
  } else {
    write_micropost_jsonl(out, events);
  }
}

}  // namespace netstab

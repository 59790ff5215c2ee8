#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "netstab/types.hpp"

namespace netstab {

enum class InputFormat { email_csv, micropost_jsonl };

InputFormat parse_input_format(std::string_view text);
Channel channel_of(InputFormat format);

struct Reject {
  std::size_t line = 0;  // 1-based physical line where the record starts
  std::string reason;
};

struct IngestOptions {
  double max_reject_fraction = 0.10;
  // The reject-ratio guard only engages once this many data rows were read.
  std::size_t min_rows_for_abort = 10;
  Timestamp earliest = Timestamp{std::chrono::sys_days{std::chrono::year{1970} / 1 / 1}};
  Timestamp latest = Timestamp{std::chrono::sys_days{std::chrono::year{2100} / 1 / 1}};
};

struct IngestResult {
  std::vector<MessageEvent> events;  // sorted by (timestamp, message_id)
  std::vector<Reject> rejects;
  std::size_t rows = 0;  // data rows seen, accepted or not
};

/// Thrown when the reject ratio exceeds the configured limit.
class IngestError : public InputError {
public:
  IngestError(const std::string& what, IngestResult partial)
      : InputError(what), partial_(std::move(partial)) {}
  const IngestResult& partial() const noexcept { return partial_; }

private:
  IngestResult partial_;
};

IngestResult ingest(const std::filesystem::path& path, InputFormat format,
                    const IngestOptions& options = {});
IngestResult ingest(std::istream& in, InputFormat format, const IngestOptions& options = {});

void write_email_csv(std::ostream& out, std::span<const MessageEvent> events);
void write_micropost_jsonl(std::ostream& out, std::span<const MessageEvent> events);
void write_events(std::ostream& out, std::span<const MessageEvent> events, InputFormat format);

namespace csv {

/// Reads one RFC-4180 record. Returns false at end of input. `line` is
/// advanced by the number of physical lines consumed.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line);

std::string quote(std::string_view field);

}  // namespace csv

}  // namespace netstab

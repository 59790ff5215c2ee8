#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace netstab {

using Timestamp = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

enum class Channel { email, micropost };

std::string_view channel_name(Channel channel);
Channel parse_channel(std::string_view text);

// Raised for anything traceable to bad user input: unreadable files,
// malformed configuration, invalid parameters, empty graphs.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Trim, strip a display name ("Jane <j@x.com>"), strip leading '@',
// lowercase. Idempotent. Returns an empty string when nothing remains.
std::string canonicalize_account(std::string_view raw);

/// Canonical account identifier (lowercased address or handle).
class NodeId {
public:
  NodeId() = default;
  /// Canonicalizes `raw`; throws InputError when the result is empty.
  explicit NodeId(std::string_view raw);

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;

private:
  std::string value_;
};

struct MessageEvent {
  std::string message_id;
  Timestamp timestamp{};
  NodeId sender;
  std::vector<NodeId> recipients;  // mentions, for microposts
  Channel channel = Channel::email;
  std::optional<std::string> in_reply_to;
  std::optional<std::string> retweet_of;
  std::optional<std::string> subject_text;
  std::optional<std::string> body_text;
  std::optional<std::int64_t> author_followers;
  std::optional<std::int64_t> author_following;
};

/// Strict weak order used everywhere events need a canonical sequence:
/// timestamp first, then message id.
bool event_precedes(const MessageEvent& a, const MessageEvent& b);

/// Stable sort by (timestamp, message_id).
void sort_events(std::vector<MessageEvent>& events);

// ISO-8601 with optional fractional seconds (truncated) and an optional
// Z or +hh:mm / -hh:mm offset. No offset means UTC.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

/// "<int><unit>" with unit one of s, m, h, d.
Duration parse_duration(std::string_view text);
std::string format_duration(Duration d);

}  // namespace netstab

template <>
struct std::hash<netstab::NodeId> {
  std::size_t operator()(const netstab::NodeId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};

#include "netstab/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace netstab {

std::string_view channel_name(Channel channel) {
  return channel == Channel::email ? "email" : "micropost";
}

Channel parse_channel(std::string_view text) {
  if (text == "email" || text == "email_csv") return Channel::email;
  if (text == "micropost" || text == "micropost_jsonl") return Channel::micropost;
  throw InputError("unknown channel/format '" + std::string(text) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string canonicalize_account(std::string_view raw) {
  std::string_view s = trim(raw);
  const auto open = s.rfind('<');
  const auto close = s.rfind('>');
  if (open != std::string_view::npos && close != std::string_view::npos && open < close) {
    s = trim(s.substr(open + 1, close - open - 1));
  }
  while (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = trim(s.substr(1, s.size() - 2));
  }
  while (!s.empty() && s.front() == '@') s.remove_prefix(1);
  s = trim(s);
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

NodeId::NodeId(std::string_view raw) : value_(canonicalize_account(raw)) {
  if (value_.empty()) {
    throw InputError("empty account identifier '" + std::string(raw) + "'");
  }
}

bool event_precedes(const MessageEvent& a, const MessageEvent& b) {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.message_id < b.message_id;
}

void sort_events(std::vector<MessageEvent>& events) {
  std::stable_sort(events.begin(), events.end(), event_precedes);
}

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return ec == std::errc{} && ptr == s.data() + pos + len;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  const std::string_view s = trim(text);
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!read_int(s, 0, 4, y) || s.size() < 19 || s[4] != '-' || !read_int(s, 5, 2, mo) ||
      s[7] != '-' || !read_int(s, 8, 2, d) || (s[10] != 'T' && s[10] != ' ') ||
      !read_int(s, 11, 2, h) || s[13] != ':' || !read_int(s, 14, 2, mi) || s[16] != ':' ||
      !read_int(s, 17, 2, sec)) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;

  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) return std::nullopt;
  }
  int offset_minutes = 0;
  if (pos < s.size()) {
    if (s[pos] == 'Z' || s[pos] == 'z') {
      ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
      const int sign = s[pos] == '+' ? 1 : -1;
      int oh = 0, om = 0;
      if (!read_int(s, pos + 1, 2, oh)) return std::nullopt;
      std::size_t next = pos + 3;
      if (next < s.size() && s[next] == ':') ++next;
      if (!read_int(s, next, 2, om)) return std::nullopt;
      pos = next + 2;
      offset_minutes = sign * (oh * 60 + om);
    }
  }
  if (pos != s.size()) return std::nullopt;

  const sys_days days{ymd};
  return Timestamp{days} + hours{h} + minutes{mi} + seconds{sec} - minutes{offset_minutes};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto days = floor<std::chrono::days>(t);
  const year_month_day ymd{days};
  const hh_mm_ss hms{t - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

Duration parse_duration(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.size() < 2) throw InputError("bad duration '" + std::string(text) + "'");
  long long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size() - 1, value);
  if (ec != std::errc{} || ptr != s.data() + s.size() - 1 || value < 0) {
    throw InputError("bad duration '" + std::string(text) + "'");
  }
  switch (s.back()) {
    case 's': return Duration{value};
    case 'm': return Duration{value * 60};
    case 'h': return Duration{value * 3600};
    case 'd': return Duration{value * 86400};
    default: throw InputError("bad duration unit in '" + std::string(text) + "' (use s/m/h/d)");
  }
}

std::string format_duration(Duration d) {
  const long long s = d.count();
  if (s != 0 && s % 86400 == 0) return std::to_string(s / 86400) + "d";
  if (s != 0 && s % 3600 == 0) return std::to_string(s / 3600) + "h";
  if (s != 0 && s % 60 == 0) return std::to_string(s / 60) + "m";
  return std::to_string(s) + "s";
}

}  // namespace netstab

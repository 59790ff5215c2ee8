#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "netstab/graph.hpp"

namespace support {

using namespace netstab;

/// 2020-01-01T00:00:00Z plus `seconds`.
inline Timestamp at(std::int64_t seconds) { return Timestamp{Duration{1577836800 + seconds}}; }

inline MessageEvent email(std::string id, std::int64_t seconds, std::string_view sender,
                          std::initializer_list<std::string_view> recipients,
                          std::optional<std::string> in_reply_to = std::nullopt) {
  MessageEvent e;
  e.message_id = std::move(id);
  e.timestamp = at(seconds);
  e.sender = NodeId(sender);
  for (const auto r : recipients) e.recipients.emplace_back(r);
  e.channel = Channel::email;
  e.in_reply_to = std::move(in_reply_to);
  return e;
}

inline MessageEvent post(std::string id, std::int64_t seconds, std::string_view author,
                         std::initializer_list<std::string_view> mentions) {
  MessageEvent e = email(std::move(id), seconds, author, mentions);
  e.channel = Channel::micropost;
  return e;
}

/// Graph on nodes named by `names` with unit-weight arcs given as index pairs.
inline CommGraph graph_of(std::vector<std::string> names, std::vector<std::pair<NodeIndex, NodeIndex>> arcs) {
  std::vector<NodeId> nodes;
  for (const auto& n : names) nodes.emplace_back(n);
  std::vector<Arc> list;
  for (const auto& [a, b] : arcs) list.push_back({a, b, 1, Timestamp{}, Timestamp{}});
  return CommGraph::from_arcs(Channel::email, std::move(nodes), std::move(list));
}

}  // namespace support

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "fanetsim/key_expr.hpp"
#include "fanetsim/sim_time.hpp"

namespace fanetsim {

struct MsgId {
  NodeId origin;
  std::uint64_t seq = 0;

  auto operator<=>(const MsgId&) const = default;
};

enum class MessageKind { Beacon, Publish, Query, Reply };

std::string_view to_string(MessageKind kind);
std::optional<MessageKind> parse_message_kind(std::string_view text);

/**
 * One unit of named-data traffic.
 *
 * hop_budget + hops_taken equals the hop limit the origin stamped. A receiver
 * charges the hop it just traversed (budget - 1, taken + 1) before acting on
 * the message, so hops_taken at a receiver is the path length.
 */
struct Message {
  MsgId id;
  MessageKind kind = MessageKind::Publish;
  KeyExpr key;
  std::int64_t payload_bytes = 0;
  int hop_budget = 0;
  int hops_taken = 0;
  SimTime origin_time;
  std::optional<MsgId> query_ref;  // Reply only
};

}  // namespace fanetsim

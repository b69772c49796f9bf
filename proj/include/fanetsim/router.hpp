#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fanetsim/key_expr.hpp"
#include "fanetsim/message.hpp"
#include "fanetsim/tables.hpp"

namespace fanetsim {

struct ProtocolParams {
  int hop_limit = 8;
  SimTime beacon_interval = SimTime::seconds(1);
  SimTime pit_lifetime = SimTime::seconds(2);
  std::size_t cs_capacity = 64;
  std::size_t seen_set_capacity = 4096;
  std::size_t pit_capacity = 1024;

  bool operator==(const ProtocolParams&) const = default;

  /// Neighbor entries older than this are treated as absent.
  SimTime neighbor_expiry() const { return SimTime::micros(3 * beacon_interval.us()); }
};

void validate(const ProtocolParams& params);

/// Local hand-off of a message to a subscription (or to the querier).
struct Delivery {
  Message msg;
  KeyExpr expr;
};

/// A transmission request; `dest` set means link-layer unicast.
struct Outbound {
  Message msg;
  std::optional<NodeId> dest;
};

/// What one call into the router asks the event loop to do.
struct Actions {
  enum class Drop { None, Duplicate, Invalid };

  Drop drop = Drop::None;
  std::string invalid_reason;
  std::optional<Message> received;  // the message after charging the arrival hop
  std::vector<Delivery> deliveries;
  std::vector<Outbound> sends;
  std::vector<ExpiredQuery> expired;  // pending queries evicted by capacity
  std::optional<SimTime> wake_at;    // pending-query expiry check
};

/**
 * Per-node named-data protocol engine.
 *
 * Publishes and queries are disseminated by controlled flooding: each node
 * processes a message id once and rebroadcasts while hop budget remains.
 * Beacons only refresh the receiver's neighbor table. Replies retrace the
 * query's breadcrumbs hop by hop as unicasts and are cached on the way.
 *
 * The router owns no clock and no channel; every call returns the actions
 * the caller must carry out.
 */
class Router {
public:
  Router(NodeId self, ProtocolParams params);

  NodeId id() const { return self_; }
  const ProtocolParams& params() const { return params_; }

  /// Local filter only; no traffic is generated.
  std::size_t subscribe(const KeyExpr& expr);
  /// Registers a concrete key this node can answer queries for.
  void add_producer(const KeyExpr& key, std::int64_t payload_bytes);

  Message make_beacon(SimTime t);
  /// Throws KeyExprError for wildcard keys.
  Actions publish(const KeyExpr& key, std::int64_t payload_bytes, SimTime t);
  Actions query(const KeyExpr& expr, SimTime t);
  /// `wire` is the message as transmitted by `from`.
  Actions handle(const Message& wire, NodeId from, SimTime t);
  /// Drops pending queries due at `t`.
  std::vector<ExpiredQuery> expire(SimTime t);

  const NeighborTable& neighbors() const { return neighbors_; }
  const PendingQueryTable& pending() const { return pit_; }
  const ContentStore& content_store() const { return cs_; }
  const std::vector<KeyExpr>& subscriptions() const { return subscriptions_; }

private:
  struct Producer {
    KeyExpr key;
    std::int64_t payload_bytes;
  };

  MsgId next_id() { return MsgId{self_, next_seq_++}; }
  std::optional<std::string> check(const Message& wire) const;
  void deliver_local(const Message& msg, Actions& out) const;
  Message make_reply(const KeyExpr& key, std::int64_t payload_bytes, const MsgId& query, SimTime t);
  void on_publish(const Message& msg, Actions& out);
  void on_query(const Message& msg, NodeId from, SimTime t, Actions& out);
  void on_reply(const Message& msg, SimTime t, Actions& out);

  NodeId self_;
  ProtocolParams params_;
  std::uint64_t next_seq_ = 0;
  std::vector<KeyExpr> subscriptions_;
  std::vector<Producer> producers_;
  NeighborTable neighbors_;
  SeenSet seen_;
  PendingQueryTable pit_;
  ContentStore cs_;
};

}  // namespace fanetsim

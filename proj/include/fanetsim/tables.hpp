#pragma once

#include <cstddef>
#include <deque>
#include <list>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "fanetsim/key_expr.hpp"
#include "fanetsim/message.hpp"
#include "fanetsim/sim_time.hpp"

namespace fanetsim {

/// One-hop neighbors discovered through beacons.
class NeighborTable {
public:
  explicit NeighborTable(SimTime expiry) : expiry_(expiry) {}

  void refresh(NodeId from, SimTime t) { last_seen_[from] = t; }
  /// Live entries: last_seen within the expiry window of `now`.
  std::vector<NodeId> neighbors(SimTime now) const;
  bool contains(NodeId id, SimTime now) const;
  std::optional<SimTime> last_seen(NodeId id) const;

private:
  SimTime expiry_;
  std::map<NodeId, SimTime> last_seen_;
};

/// Bounded set of recently processed message ids with FIFO eviction.
class SeenSet {
public:
  explicit SeenSet(std::size_t capacity) : capacity_(capacity) {}

  /// Returns false when `id` was already present.
  bool insert(const MsgId& id);
  bool contains(const MsgId& id) const { return members_.count(id) != 0; }
  std::size_t size() const { return order_.size(); }

private:
  std::size_t capacity_;
  std::deque<MsgId> order_;
  std::set<MsgId> members_;
};

struct ExpiredQuery {
  MsgId id;
  KeyExpr key;
};

/**
 * Reverse-path breadcrumbs for queries in flight.
 *
 * Bounded; inserting into a full table evicts the oldest entry. `local`
 * marks queries issued by the owning node.
 */
class PendingQueryTable {
public:
  struct Entry {
    std::set<NodeId> upstream;
    KeyExpr key;
    SimTime expires_at;
    bool local = false;
  };

  explicit PendingQueryTable(std::size_t capacity) : capacity_(capacity) {}

  /// Inserts or extends an entry; returns entries evicted to make room.
  std::vector<ExpiredQuery> add(const MsgId& query, const KeyExpr& key, SimTime expires_at, std::optional<NodeId> upstream,
                         bool local);
  const Entry* find(const MsgId& query) const;
  /// Removes and returns the upstream set; keeps local entries (minus upstreams).
  std::set<NodeId> consume_upstream(const MsgId& query);
  /// Drops entries with expires_at <= now, returned in id order.
  std::vector<ExpiredQuery> expire(SimTime now);
  std::size_t size() const { return entries_.size(); }

private:
  std::size_t capacity_;
  std::map<MsgId, Entry> entries_;
  std::deque<MsgId> order_;  // insertion order; may hold ids already removed
};

/// LRU cache of named payloads carried by replies.
class ContentStore {
public:
  struct Entry {
    KeyExpr key;
    std::int64_t payload_bytes = 0;
    SimTime stored_at;
    MsgId origin;
  };

  explicit ContentStore(std::size_t capacity) : capacity_(capacity) {}

  void store(const KeyExpr& key, std::int64_t payload_bytes, SimTime t, const MsgId& origin);
  /// Exact-key lookup; refreshes recency.
  const Entry* lookup(const KeyExpr& key);
  /// Entries whose key is matched by `expr`, most recent first; refreshes recency.
  std::vector<Entry> match(const KeyExpr& expr);
  std::size_t size() const { return lru_.size(); }
  std::size_t capacity() const { return capacity_; }

private:
  std::size_t capacity_;
  std::list<Entry> lru_;  // front = most recent
  std::map<KeyExpr, std::list<Entry>::iterator> index_;
};

}  // namespace fanetsim

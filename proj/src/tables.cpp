#include "fanetsim/tables.hpp"

#include <algorithm>

namespace fanetsim {

std::vector<NodeId> NeighborTable::neighbors(SimTime now) const
{
  std::vector<NodeId> out;
  for (const auto& [id, seen] : last_seen_) {
    if (now - seen <= expiry_) out.push_back(id);
  }
  return out;
}

bool NeighborTable::contains(NodeId id, SimTime now) const
{
  const auto it = last_seen_.find(id);
  return it != last_seen_.end() && now - it->second <= expiry_;
}

std::optional<SimTime> NeighborTable::last_seen(NodeId id) const
{
  const auto it = last_seen_.find(id);
  if (it == last_seen_.end()) return std::nullopt;
  return it->second;
}

bool SeenSet::insert(const MsgId& id)
{
  if (!members_.insert(id).second) return false;
  order_.push_back(id);
  while (order_.size() > capacity_) {
    members_.erase(order_.front());
    order_.pop_front();
  }
  return true;
}

std::vector<ExpiredQuery> PendingQueryTable::add(const MsgId& query, const KeyExpr& key, SimTime expires_at,
                                          std::optional<NodeId> upstream, bool local)
{
  std::vector<ExpiredQuery> evicted;
  auto it = entries_.find(query);
  if (it == entries_.end()) {
    while (entries_.size() >= capacity_ && !order_.empty()) {
      const MsgId oldest = order_.front();
      order_.pop_front();
      if (const auto victim = entries_.find(oldest); victim != entries_.end()) {
        evicted.push_back(ExpiredQuery{oldest, victim->second.key});
        entries_.erase(victim);
      }
    }
    it = entries_.emplace(query, Entry{{}, key, expires_at, local}).first;
    order_.push_back(query);
  }
  if (upstream) it->second.upstream.insert(*upstream);
  it->second.local = it->second.local || local;
  return evicted;
}

const PendingQueryTable::Entry* PendingQueryTable::find(const MsgId& query) const
{
  const auto it = entries_.find(query);
  return it == entries_.end() ? nullptr : &it->second;
}

std::set<NodeId> PendingQueryTable::consume_upstream(const MsgId& query)
{
  const auto it = entries_.find(query);
  if (it == entries_.end()) return {};
  std::set<NodeId> upstream = std::move(it->second.upstream);
  it->second.upstream.clear();
  if (!it->second.local) entries_.erase(it);
  return upstream;
}

std::vector<ExpiredQuery> PendingQueryTable::expire(SimTime now)
{
  std::vector<ExpiredQuery> gone;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->second.expires_at <= now) {
      gone.push_back(ExpiredQuery{it->first, it->second.key});
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
  if (!gone.empty()) {
    // Compact the order queue so it stays proportional to the live entries.
    std::erase_if(order_, [this](const MsgId& id) { return entries_.count(id) == 0; });
  }
  return gone;
}

void ContentStore::store(const KeyExpr& key, std::int64_t payload_bytes, SimTime t, const MsgId& origin)
{
  if (capacity_ == 0) return;
  if (const auto it = index_.find(key); it != index_.end()) {
    lru_.erase(it->second);
    index_.erase(it);
  }
  lru_.push_front(Entry{key, payload_bytes, t, origin});
  index_[key] = lru_.begin();
  while (lru_.size() > capacity_) {
    index_.erase(lru_.back().key);
    lru_.pop_back();
  }
}

const ContentStore::Entry* ContentStore::lookup(const KeyExpr& key)
{
  const auto it = index_.find(key);
  if (it == index_.end()) return nullptr;
  lru_.splice(lru_.begin(), lru_, it->second);
  return &*it->second;
}

std::vector<ContentStore::Entry> ContentStore::match(const KeyExpr& expr)
{
  std::vector<std::list<Entry>::iterator> hits;
  for (auto it = lru_.begin(); it != lru_.end(); ++it) {
    if (key_expr_intersects(expr, it->key)) hits.push_back(it);
  }
  std::vector<Entry> out;
  out.reserve(hits.size());
  for (auto it : hits) out.push_back(*it);
  // Move hits to the front while keeping their relative order.
  for (auto rit = hits.rbegin(); rit != hits.rend(); ++rit) lru_.splice(lru_.begin(), lru_, *rit);
  return out;
}

}  // namespace fanetsim

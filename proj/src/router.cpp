#include "fanetsim/router.hpp"

#include <stdexcept>

namespace fanetsim {

namespace {

const KeyExpr& beacon_key()
{
  static const KeyExpr key = KeyExpr::parse("beacon");
  return key;
}

}  // namespace

void validate(const ProtocolParams& p)
{
  if (p.hop_limit < 1) throw std::invalid_argument("hop_limit must be >= 1");
  if (p.beacon_interval <= SimTime{}) throw std::invalid_argument("beacon_interval must be positive");
  if (p.pit_lifetime <= SimTime{}) throw std::invalid_argument("pit_lifetime must be positive");
  if (p.seen_set_capacity == 0) throw std::invalid_argument("seen_set_capacity must be positive");
  if (p.pit_capacity == 0) throw std::invalid_argument("pit_capacity must be positive");
}

Router::Router(NodeId self, ProtocolParams params)
    : self_(self),
      params_(params),
      neighbors_(params.neighbor_expiry()),
      seen_(params.seen_set_capacity),
      pit_(params.pit_capacity),
      cs_(params.cs_capacity)
{
  validate(params_);
}

std::size_t Router::subscribe(const KeyExpr& expr)
{
  subscriptions_.push_back(expr);
  return subscriptions_.size() - 1;
}

void Router::add_producer(const KeyExpr& key, std::int64_t payload_bytes)
{
  if (!key.is_concrete()) throw KeyExprError("producer key '" + key.str() + "' must be concrete");
  producers_.push_back(Producer{key, payload_bytes});
}

Message Router::make_beacon(SimTime t)
{
  Message m;
  m.id = next_id();
  m.kind = MessageKind::Beacon;
  m.key = beacon_key();
  m.payload_bytes = 0;
  m.hop_budget = 1;
  m.hops_taken = 0;
  m.origin_time = t;
  return m;
}

Actions Router::publish(const KeyExpr& key, std::int64_t payload_bytes, SimTime t)
{
  if (!key.is_concrete()) throw KeyExprError("publish key '" + key.str() + "' must be concrete");
  if (payload_bytes < 0) throw std::invalid_argument("payload_bytes must be non-negative");
  Message m;
  m.id = next_id();
  m.kind = MessageKind::Publish;
  m.key = key;
  m.payload_bytes = payload_bytes;
  m.hop_budget = params_.hop_limit;
  m.hops_taken = 0;
  m.origin_time = t;
  seen_.insert(m.id);

  Actions out;
  deliver_local(m, out);
  out.sends.push_back(Outbound{m, std::nullopt});
  return out;
}

Actions Router::query(const KeyExpr& expr, SimTime t)
{
  Message m;
  m.id = next_id();
  m.kind = MessageKind::Query;
  m.key = expr;
  m.payload_bytes = 0;
  m.hop_budget = params_.hop_limit;
  m.hops_taken = 0;
  m.origin_time = t;
  seen_.insert(m.id);

  Actions out;
  out.expired = pit_.add(m.id, expr, t + params_.pit_lifetime, std::nullopt, true);
  out.wake_at = t + params_.pit_lifetime;
  out.sends.push_back(Outbound{m, std::nullopt});
  return out;
}

std::optional<std::string> Router::check(const Message& wire) const
{
  if (wire.hop_budget < 1) return "hop budget exhausted on the wire";
  if (wire.hops_taken < 0) return "negative hops_taken";
  if (wire.payload_bytes < 0) return "negative payload";
  if (wire.kind == MessageKind::Beacon) {
    if (wire.hops_taken != 0 || wire.hop_budget != 1) return "beacon was forwarded";
    return std::nullopt;
  }
  if (wire.hop_budget + wire.hops_taken > params_.hop_limit) return "hop count exceeds hop limit";
  if (wire.key.chunks().empty()) return "empty key";
  if ((wire.kind == MessageKind::Publish || wire.kind == MessageKind::Reply) && !wire.key.is_concrete())
    return "wildcard key on a publication";
  if (wire.kind == MessageKind::Reply && !wire.query_ref) return "reply without query reference";
  return std::nullopt;
}

Actions Router::handle(const Message& wire, NodeId from, SimTime t)
{
  Actions out;
  if (auto reason = check(wire)) {
    out.drop = Actions::Drop::Invalid;
    out.invalid_reason = std::move(*reason);
    return out;
  }

  Message msg = wire;
  msg.hop_budget -= 1;
  msg.hops_taken += 1;
  out.received = msg;

  if (msg.kind == MessageKind::Beacon) {
    neighbors_.refresh(from, t);
    return out;
  }
  if (!seen_.insert(msg.id)) {
    out.drop = Actions::Drop::Duplicate;
    return out;
  }

  switch (msg.kind) {
    case MessageKind::Publish:
      on_publish(msg, out);
      break;
    case MessageKind::Query:
      on_query(msg, from, t, out);
      break;
    case MessageKind::Reply:
      on_reply(msg, t, out);
      break;
    case MessageKind::Beacon:
      break;
  }
  return out;
}

std::vector<ExpiredQuery> Router::expire(SimTime t)
{
  return pit_.expire(t);
}

void Router::deliver_local(const Message& msg, Actions& out) const
{
  for (const auto& expr : subscriptions_) {
    if (key_expr_match(expr, msg.key)) out.deliveries.push_back(Delivery{msg, expr});
  }
}

Message Router::make_reply(const KeyExpr& key, std::int64_t payload_bytes, const MsgId& query, SimTime t)
{
  Message r;
  r.id = next_id();
  r.kind = MessageKind::Reply;
  r.key = key;
  r.payload_bytes = payload_bytes;
  r.hop_budget = params_.hop_limit;
  r.hops_taken = 0;
  r.origin_time = t;
  r.query_ref = query;
  seen_.insert(r.id);
  return r;
}

void Router::on_publish(const Message& msg, Actions& out)
{
  deliver_local(msg, out);
  if (msg.hop_budget >= 1) out.sends.push_back(Outbound{msg, std::nullopt});
}

void Router::on_query(const Message& msg, NodeId from, SimTime t, Actions& out)
{
  // Fresh data from a local producer wins over cached copies.
  for (const auto& p : producers_) {
    if (key_expr_intersects(msg.key, p.key)) {
      out.sends.push_back(Outbound{make_reply(p.key, p.payload_bytes, msg.id, t), from});
    }
  }
  if (!out.sends.empty()) return;

  for (const auto& entry : cs_.match(msg.key)) {
    out.sends.push_back(Outbound{make_reply(entry.key, entry.payload_bytes, msg.id, t), from});
  }
  if (!out.sends.empty()) return;

  if (msg.hop_budget < 1) return;
  out.expired = pit_.add(msg.id, msg.key, t + params_.pit_lifetime, from, false);
  out.wake_at = t + params_.pit_lifetime;
  out.sends.push_back(Outbound{msg, std::nullopt});
}

void Router::on_reply(const Message& msg, SimTime t, Actions& out)
{
  if (const auto* entry = pit_.find(*msg.query_ref); entry != nullptr && entry->local) {
    out.deliveries.push_back(Delivery{msg, entry->key});
  }
  cs_.store(msg.key, msg.payload_bytes, t, msg.id);
  const auto upstream = pit_.consume_upstream(*msg.query_ref);
  if (msg.hop_budget < 1) return;
  for (NodeId up : upstream) out.sends.push_back(Outbound{msg, up});
}

}  // namespace fanetsim

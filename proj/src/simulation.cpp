#include "fanetsim/simulation.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "fanetsim/channel.hpp"
#include "fanetsim/errors.hpp"
#include "fanetsim/metrics.hpp"
#include "fanetsim/random.hpp"

namespace fanetsim {

namespace {

constexpr std::string_view kTagBeacon = "beacon";
constexpr std::string_view kTagPublish = "publish";
constexpr std::string_view kTagQuery = "query";
constexpr std::string_view kTagRx = "rx";
constexpr std::string_view kTagExpire = "expire";
constexpr std::string_view kTagSample = "sample";

MobilityState initial_state(const MobilitySpec& spec, const BoundsBox& bounds, RandomStream& rng)
{
  return std::visit(
      [&](const auto& m) -> MobilityState {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, StaticSpec>) {
          return make_static(m.position);
        } else if constexpr (std::is_same_v<T, RandomWaypointSpec>) {
          return make_random_waypoint(RandomWaypointModel{bounds, m.speed_min, m.speed_max, m.pause}, m.start, rng);
        } else {
          return make_orbit(CircularOrbitModel{m.center, m.radius, m.angular_speed, m.phase, SimTime{}});
        }
      },
      spec);
}

}  // namespace

TraceHeader make_trace_header(const Scenario& scenario, std::uint64_t seed)
{
  TraceHeader h;
  h.version = FANETSIM_VERSION;
  h.seed = seed;
  h.scenario_digest = scenario_digest(scenario);
  h.duration = scenario.duration;
  h.hop_limit = scenario.protocol.hop_limit;
  h.beacon_interval = scenario.protocol.beacon_interval;
  for (std::uint32_t i = 0; i < scenario.nodes.size(); ++i) {
    const auto& n = scenario.nodes[i];
    h.nodes.push_back(n.id);
    for (const auto& app : n.apps) {
      if (const auto* s = std::get_if<SubscriberApp>(&app)) h.subscriptions.push_back({NodeId{i}, s->expr.str()});
      if (const auto* q = std::get_if<QuerierApp>(&app)) h.queries.push_back({NodeId{i}, q->expr.str()});
    }
  }
  return h;
}

struct Simulation::Impl {
  struct Node {
    std::string name;
    Trajectory trajectory;
    Router router;
    RandomStream channel_rng;
  };

  Impl(const Scenario& sc, std::uint64_t s, TraceSink& out, std::ostream* pos)
      : scenario(sc), seed(s), sink(out), positions_out(pos)
  {
    nodes.reserve(sc.nodes.size());
    for (std::uint32_t i = 0; i < sc.nodes.size(); ++i) {
      const NodeId id{i};
      RandomStream mobility_rng(seed, id, "mobility");
      MobilityState state = initial_state(sc.nodes[i].mobility, sc.bounds, mobility_rng);
      nodes.push_back(Node{sc.nodes[i].id, Trajectory(std::move(state), mobility_rng), Router(id, sc.protocol),
                           RandomStream(seed, id, "channel")});
    }
    names = make_trace_header(sc, seed).nodes;
  }

  const Scenario& scenario;
  std::uint64_t seed;
  TraceSink& sink;
  std::ostream* positions_out;
  Scheduler scheduler;
  std::vector<Node> nodes;
  std::vector<std::string> names;
  bool ran = false;

  std::vector<Position> positions_at(SimTime t)
  {
    std::vector<Position> out;
    out.reserve(nodes.size());
    for (auto& n : nodes) out.push_back(n.trajectory.position(t));
    return out;
  }

  void record(TraceEvent event, NodeId node, const Message& msg, std::optional<NodeId> to = std::nullopt,
              std::string expr = {})
  {
    TraceRecord r;
    r.t = scheduler.now();
    r.node = node;
    r.event = event;
    r.msg = msg.id;
    r.kind = msg.kind;
    r.key = msg.key.str();
    r.expr = std::move(expr);
    r.ref = msg.query_ref;
    r.to = to;
    r.payload_bytes = msg.payload_bytes;
    r.hops_taken = msg.hops_taken;
    r.origin_time = msg.origin_time;
    sink.write(r);
  }

  void record_expired(NodeId node, const ExpiredQuery& q)
  {
    TraceRecord r;
    r.t = scheduler.now();
    r.node = node;
    r.event = TraceEvent::Expire;
    r.msg = q.id;
    r.kind = MessageKind::Query;
    r.key = q.key.str();
    sink.write(r);
  }

  void transmit(NodeId tx, const Message& msg, std::optional<NodeId> dest)
  {
    const SimTime now = scheduler.now();
    record(TraceEvent::Send, tx, msg, dest);
    const auto pos = positions_at(now);
    auto& rng = nodes[tx.value].channel_rng;
    std::vector<channel::Reception> receptions;
    if (dest) {
      receptions.push_back(channel::unicast(tx, *dest, pos, now, msg.payload_bytes, scenario.channel, rng));
    } else {
      receptions = channel::broadcast(tx, pos, now, msg.payload_bytes, scenario.channel, rng);
    }
    for (const auto& rx : receptions) {
      switch (rx.outcome) {
        case channel::Outcome::RangeDrop:
          record(TraceEvent::RangeDrop, rx.rx, msg);
          break;
        case channel::Outcome::LossDrop:
          record(TraceEvent::LossDrop, rx.rx, msg);
          break;
        case channel::Outcome::Delivered:
          scheduler.schedule(rx.arrive_at, rx.rx, kTagRx, [this, msg, to = rx.rx, tx] { receive(to, msg, tx); });
          break;
      }
    }
  }

  void receive(NodeId node, const Message& wire, NodeId from)
  {
    Actions actions = nodes[node.value].router.handle(wire, from, scheduler.now());
    if (actions.drop == Actions::Drop::Invalid) {
      spdlog::debug("{}: dropping malformed message from {}: {}", names[node.value], names[from.value],
                    actions.invalid_reason);
      record(TraceEvent::Invalid, node, wire);
      return;
    }
    record(TraceEvent::Recv, node, *actions.received);
    if (actions.drop == Actions::Drop::Duplicate) {
      record(TraceEvent::DupDrop, node, *actions.received);
      return;
    }
    apply(node, actions);
  }

  void apply(NodeId node, const Actions& actions)
  {
    for (const auto& q : actions.expired) record_expired(node, q);
    for (const auto& d : actions.deliveries) record(TraceEvent::Deliver, node, d.msg, std::nullopt, d.expr.str());
    for (const auto& out : actions.sends) transmit(node, out.msg, out.dest);
    if (actions.wake_at) {
      scheduler.schedule(*actions.wake_at, node, kTagExpire, [this, node] {
        for (const auto& q : nodes[node.value].router.expire(scheduler.now())) record_expired(node, q);
      });
    }
  }

  void beacon(NodeId node)
  {
    Message b = nodes[node.value].router.make_beacon(scheduler.now());
    transmit(node, b, std::nullopt);
    const SimTime next = scheduler.now() + scenario.protocol.beacon_interval;
    if (next <= scenario.duration) scheduler.schedule(next, node, kTagBeacon, [this, node] { beacon(node); });
  }

  void publish(NodeId node, const PublisherApp& app)
  {
    apply(node, nodes[node.value].router.publish(app.key, app.payload_bytes, scheduler.now()));
    const SimTime next = scheduler.now() + app.period;
    if (next <= scenario.duration)
      scheduler.schedule(next, node, kTagPublish, [this, node, &app] { publish(node, app); });
  }

  void query(NodeId node, const QuerierApp& app)
  {
    apply(node, nodes[node.value].router.query(app.expr, scheduler.now()));
    const SimTime next = scheduler.now() + app.period;
    if (next <= scenario.duration) scheduler.schedule(next, node, kTagQuery, [this, node, &app] { query(node, app); });
  }

  void sample_positions()
  {
    const SimTime now = scheduler.now();
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
      const Position p = nodes[i].trajectory.position(now);
      nlohmann::ordered_json j{{"t", now.us()}, {"node", names[i]}, {"x", p.x}, {"y", p.y}, {"z", p.z}};
      *positions_out << j.dump() << '\n';
    }
    const SimTime next = now + *scenario.position_sample_interval;
    if (next <= scenario.duration) scheduler.schedule(next, NodeId{}, kTagSample, [this] { sample_positions(); });
  }

  void run()
  {
    if (ran) throw std::logic_error("Simulation::run called twice");
    ran = true;
    sink.write_header(make_trace_header(scenario, seed));

    const auto interval = static_cast<std::uint64_t>(scenario.protocol.beacon_interval.us());
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
      const NodeId id{i};
      auto& router = nodes[i].router;
      for (const auto& app : scenario.nodes[i].apps) {
        if (const auto* s = std::get_if<SubscriberApp>(&app)) router.subscribe(s->expr);
        if (const auto* p = std::get_if<PublisherApp>(&app)) router.add_producer(p->key, p->payload_bytes);
      }
      RandomStream beacon_rng(seed, id, kTagBeacon);
      const SimTime phase = SimTime::micros(static_cast<std::int64_t>(beacon_rng.below(interval)));
      if (phase <= scenario.duration) scheduler.schedule(phase, id, kTagBeacon, [this, id] { beacon(id); });
    }
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
      const NodeId id{i};
      for (const auto& app : scenario.nodes[i].apps) {
        if (const auto* p = std::get_if<PublisherApp>(&app); p != nullptr && p->start <= scenario.duration)
          scheduler.schedule(p->start, id, kTagPublish, [this, id, p] { publish(id, *p); });
        if (const auto* q = std::get_if<QuerierApp>(&app); q != nullptr && q->start <= scenario.duration)
          scheduler.schedule(q->start, id, kTagQuery, [this, id, q] { query(id, *q); });
      }
    }
    if (positions_out != nullptr && scenario.position_sample_interval) {
      scheduler.schedule(SimTime{}, NodeId{}, kTagSample, [this] { sample_positions(); });
    }

    const std::size_t fired = scheduler.run_until(scenario.duration);
    spdlog::info("run finished: {} events fired, {} still pending at t={}us", fired, scheduler.pending(),
                 scenario.duration.us());
  }
};

Simulation::Simulation(const Scenario& scenario, std::uint64_t seed, TraceSink& sink, std::ostream* positions)
    : impl_(std::make_unique<Impl>(scenario, seed, sink, positions))
{
}

Simulation::~Simulation() = default;

void Simulation::run() { impl_->run(); }

Scheduler& Simulation::scheduler() { return impl_->scheduler; }

const Router& Simulation::router(NodeId node) const { return impl_->nodes.at(node.value).router; }

NodeId Simulation::node_id(std::string_view name) const
{
  for (std::uint32_t i = 0; i < impl_->names.size(); ++i) {
    if (impl_->names[i] == name) return NodeId{i};
  }
  throw std::out_of_range("unknown node '" + std::string(name) + "'");
}

std::size_t Simulation::node_count() const { return impl_->nodes.size(); }

Position Simulation::position(NodeId node, SimTime t) { return impl_->nodes.at(node.value).trajectory.position(t); }

RunArtifacts run_scenario(const Scenario& scenario, std::uint64_t seed, const std::filesystem::path& out_dir)
{
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir, "cannot create output directory: " + ec.message());

  RunArtifacts art;
  art.trace = out_dir / "trace.jsonl";
  art.summary = out_dir / "summary.json";
  {
    std::ofstream trace_out(art.trace, std::ios::binary | std::ios::trunc);
    if (!trace_out) throw IoError(art.trace, "cannot open for writing");
    std::ofstream pos_out;
    std::ostream* pos_stream = nullptr;
    if (scenario.position_sample_interval) {
      art.positions = out_dir / "positions.jsonl";
      pos_out.open(*art.positions, std::ios::binary | std::ios::trunc);
      if (!pos_out) throw IoError(*art.positions, "cannot open for writing");
      pos_stream = &pos_out;
    }
    JsonlTraceWriter writer(trace_out);
    spdlog::info("running scenario with seed {} for {} ms", seed, scenario.duration.us() / 1000);
    Simulation sim(scenario, seed, writer, pos_stream);
    sim.run();
    trace_out.flush();
    if (!trace_out) throw IoError(art.trace, "write failed");
    if (pos_stream != nullptr && !pos_out.flush()) throw IoError(*art.positions, "write failed");
  }

  const Trace trace = read_trace_file(art.trace);
  art.summary_text = metrics::render_summary(metrics::summarize(trace));
  std::ofstream summary_out(art.summary, std::ios::binary | std::ios::trunc);
  if (!summary_out) throw IoError(art.summary, "cannot open for writing");
  summary_out << art.summary_text;
  if (!summary_out.flush()) throw IoError(art.summary, "write failed");
  return art;
}

Trace run_to_memory(const Scenario& scenario, std::uint64_t seed)
{
  MemoryTrace mem;
  Simulation sim(scenario, seed, mem);
  sim.run();
  return mem.trace();
}

}  // namespace fanetsim

#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include "fanetsim/metrics.hpp"
#include "fanetsim/simulation.hpp"

namespace fanetsim {
namespace {

const std::filesystem::path kScenarios{FANETSIM_SCENARIO_DIR};

NodeSpec static_node(const std::string& id, Position p)
{
  NodeSpec n;
  n.id = id;
  n.mobility = StaticSpec{p};
  return n;
}

Scenario line3(SimTime duration)
{
  Scenario s;
  s.duration = duration;
  s.seed = 5;
  s.nodes = {static_node("a", {0, 0, 50}), static_node("b", {200, 0, 50}), static_node("c", {400, 0, 50})};
  return s;
}

TEST(Simulation, ThreeNodeLineNeighbors)
{
  const auto scenario = line3(SimTime::seconds(5));
  MemoryTrace sink;
  Simulation sim(scenario, scenario.seed, sink);
  sim.run();
  const auto now = sim.scheduler().now();
  EXPECT_EQ(sim.router(NodeId{0}).neighbors().neighbors(now), (std::vector<NodeId>{NodeId{1}}));
  EXPECT_EQ(sim.router(NodeId{1}).neighbors().neighbors(now), (std::vector<NodeId>{NodeId{0}, NodeId{2}}));
  EXPECT_EQ(sim.router(NodeId{2}).neighbors().neighbors(now), (std::vector<NodeId>{NodeId{1}}));
}

TEST(Simulation, BeaconsOnlySentByOrigin)
{
  const auto trace = run_to_memory(load_scenario(kScenarios / "line4.json"), 3);
  std::size_t beacons = 0;
  for (const auto& r : trace.records) {
    if (r.kind != MessageKind::Beacon) continue;
    EXPECT_LE(r.hops_taken, 1);
    if (r.event == TraceEvent::Send) {
      ++beacons;
      EXPECT_EQ(r.node, r.msg.origin);
    }
  }
  EXPECT_GT(beacons, 0u);
}

TEST(Simulation, SameSeedSameTrace)
{
  const auto s = load_scenario(kScenarios / "swarm_rwp.json");
  const auto a = run_to_memory(s, 11);
  const auto b = run_to_memory(s, 11);
  EXPECT_EQ(a.header, b.header);
  EXPECT_EQ(a.records, b.records);
  EXPECT_NE(run_to_memory(s, 12).records, a.records);
}

TEST(Simulation, NeighborExpiresAfterLeavingRange)
{
  // b circles around (300, 0, 0) with radius 200: within decode range of a
  // only for t in roughly (7.2 s, 12.8 s) of every 20 s period, so the last
  // beacon heard lands in (11.8 s, 12.8 s].
  auto make = [](SimTime duration) {
    Scenario s;
    s.duration = duration;
    s.seed = 2;
    NodeSpec b;
    b.id = "b";
    b.mobility = OrbitSpec{{300, 0, 0}, 200.0, std::numbers::pi / 10.0, 0.0};
    s.nodes = {static_node("a", {0, 0, 0}), b};
    return s;
  };
  auto neighbors_at_end = [](const Scenario& s) {
    MemoryTrace sink;
    Simulation sim(s, s.seed, sink);
    sim.run();
    return sim.router(NodeId{0}).neighbors().neighbors(sim.scheduler().now());
  };
  EXPECT_EQ(neighbors_at_end(make(SimTime::seconds(14))), (std::vector<NodeId>{NodeId{1}}));
  EXPECT_TRUE(neighbors_at_end(make(SimTime::seconds(16))).empty());
}

TEST(Simulation, TwoNodeTelemetry)
{
  const auto trace = run_to_memory(load_scenario(kScenarios / "two_node.json"), 9);
  const metrics::FlowKey flow{NodeId{1}, NodeId{0}, "uav1/**"};
  EXPECT_DOUBLE_EQ(*metrics::delivery_ratio(trace, flow), 1.0);
  const auto lat = metrics::latency_stats(trace, flow);
  ASSERT_TRUE(lat);
  // 1452 B + 48 B header at 12 Mbit/s, 100 m of propagation rounds to 0 us.
  EXPECT_EQ(lat->max, 1000);
  EXPECT_EQ(lat->p50, 1000);
}

TEST(Simulation, TwoHopLatencyLowerBound)
{
  const auto trace = run_to_memory(load_scenario(kScenarios / "line4.json"), 1);
  for (const auto& f : metrics::extract_flows(trace)) {
    for (const auto& s : f.samples) {
      const auto per_hop = channel::tx_delay(s.payload_bytes, channel::ChannelParams{}).us();
      EXPECT_GE((s.received - s.sent).us(), s.hops * per_hop);
    }
  }
}

TEST(Simulation, PositionSamplesFollowMobility)
{
  const auto s = load_scenario(kScenarios / "orbit_relay.json");
  MemoryTrace sink;
  Simulation sim(s, s.seed, sink);
  const auto relay = sim.node_id("relay");
  const auto p = sim.position(relay, SimTime::seconds(5));
  EXPECT_NEAR(distance(p, Position{200, 0, 60}), 30.0, 1e-9);
}

}  // namespace
}  // namespace fanetsim

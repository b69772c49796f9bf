#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fanetsim/mobility.hpp"

namespace fanetsim {
namespace {

void expect_near(const Position& a, const Position& b, double tol = 1e-6)
{
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

RandomWaypointModel box_model()
{
  RandomWaypointModel m;
  m.bounds = BoundsBox{{0, 0, 20}, {600, 600, 120}};
  m.speed_min = 5.0;
  m.speed_max = 15.0;
  m.pause = SimTime::seconds(2);
  return m;
}

TEST(Mobility, StaticNeverMoves)
{
  const auto s = make_static({1, 2, 3});
  expect_near(position_at(s, SimTime{}), {1, 2, 3});
  expect_near(position_at(s, SimTime::seconds(1000)), {1, 2, 3});
}

TEST(Mobility, LegMidpointIsLinear)
{
  RandomWaypointModel m;
  m.bounds = BoundsBox{{0, 0, 0}, {100, 100, 100}};
  MobilityState s{m, Leg{{0, 0, 0}, {100, 0, 100}, SimTime{}, 10.0}};
  const double length = std::sqrt(2.0) * 100.0;
  const auto half = SimTime::micros(std::llround(length / 10.0 / 2.0 * 1e6));
  expect_near(position_at(s, half), {50, 0, 50}, 1e-4);
  expect_near(position_at(s, s.leg.arrival()), {100, 0, 100});
  expect_near(position_at(s, s.leg.arrival() + SimTime::seconds(5)), {100, 0, 100});
}

TEST(Mobility, OrbitMatchesDirectTrigonometry)
{
  CircularOrbitModel orbit{{0, 0, 100}, 50.0, std::numbers::pi / 10.0, 0.0, SimTime{}};
  const auto s = make_orbit(orbit);
  expect_near(position_at(s, SimTime::seconds(10)), {-50, 0, 100});
  for (int ms = 0; ms <= 20000; ms += 733) {
    const double th = orbit.angular_speed * ms / 1000.0;
    expect_near(position_at(s, SimTime::millis(ms)), {50 * std::cos(th), 50 * std::sin(th), 100});
  }
}

TEST(Mobility, QueriesBeforeStartThrow)
{
  CircularOrbitModel orbit{{0, 0, 100}, 50.0, 0.1, 0.0, SimTime::seconds(5)};
  EXPECT_THROW(position_at(make_orbit(orbit), SimTime::seconds(1)), std::out_of_range);

  RandomWaypointModel m = box_model();
  MobilityState s{m, Leg{{1, 1, 30}, {2, 2, 30}, SimTime::seconds(3), 5.0}};
  EXPECT_THROW(position_at(s, SimTime::seconds(2)), std::out_of_range);
}

TEST(Mobility, WaypointsStayInBounds)
{
  const auto m = box_model();
  RandomStream rng(42, NodeId{1}, "mobility");
  auto s = make_random_waypoint(m, {300, 300, 50}, rng);
  for (int i = 0; i < 10000; ++i) {
    ASSERT_TRUE(m.bounds.contains(s.leg.end)) << "leg " << i;
    ASSERT_GE(s.leg.speed, m.speed_min);
    ASSERT_LE(s.leg.speed, m.speed_max);
    const auto next = next_leg(s, rng);
    ASSERT_EQ(next.leg.depart, s.leg.arrival() + m.pause);
    ASSERT_EQ(next.leg.start, s.leg.end);
    s = next;
  }
}

TEST(Mobility, DegenerateSpeedRangeIsConstant)
{
  auto m = box_model();
  m.speed_min = m.speed_max = 7.5;
  RandomStream rng(3, NodeId{0}, "mobility");
  auto s = make_random_waypoint(m, {10, 10, 30}, rng);
  for (int i = 0; i < 100; ++i) {
    ASSERT_DOUBLE_EQ(s.leg.speed, 7.5);
    s = next_leg(s, rng);
  }
}

TEST(Mobility, InvalidModelsRejected)
{
  auto m = box_model();
  m.speed_min = 20.0;
  EXPECT_THROW(validate(m), std::invalid_argument);
  m = box_model();
  m.bounds = BoundsBox{{5, 5, 5}, {5, 5, 5}};
  m.pause = SimTime{};
  EXPECT_THROW(validate(m), std::invalid_argument);
  RandomStream rng(1, NodeId{0}, "mobility");
  EXPECT_THROW(make_random_waypoint(box_model(), {-1, 0, 50}, rng), std::invalid_argument);
}

// Sampled positions never jump further than max_speed * dt (plus rounding),
// and the lazily advanced trajectory matches an eager leg walk.
TEST(Mobility, TrajectoryIsContinuousAndMatchesEagerWalk)
{
  const auto m = box_model();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RandomStream rng(seed, NodeId{2}, "mobility");
    const auto initial = make_random_waypoint(m, {100, 100, 50}, rng);
    Trajectory traj(initial, rng);

    RandomStream eager_rng = rng;
    MobilityState eager = initial;

    const SimTime dt = SimTime::millis(100);
    Position prev = traj.position(SimTime{});
    for (SimTime t = dt; t <= SimTime::seconds(300); t += dt) {
      const Position p = traj.position(t);
      ASSERT_LE(distance(prev, p), traj.max_speed() * dt.to_seconds() + 1e-3) << "seed " << seed;
      prev = p;
      while (t >= leg_complete_at(eager)) eager = next_leg(eager, eager_rng);
      ASSERT_EQ(position_at(eager, t), p);
    }
  }
}

}  // namespace
}  // namespace fanetsim

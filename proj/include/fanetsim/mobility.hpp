#pragma once

#include <variant>

#include "fanetsim/random.hpp"
#include "fanetsim/sim_time.hpp"

namespace fanetsim {

/// Meters; z is altitude.
struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Position&) const = default;
};

double distance(const Position& a, const Position& b);

struct BoundsBox {
  Position min;
  Position max;

  bool operator==(const BoundsBox&) const = default;
  bool contains(const Position& p) const;
  bool empty() const;
};

struct StaticModel {
  Position position;
  bool operator==(const StaticModel&) const = default;
};

struct RandomWaypointModel {
  BoundsBox bounds;
  double speed_min = 1.0;  // m/s
  double speed_max = 1.0;
  SimTime pause;

  bool operator==(const RandomWaypointModel&) const = default;
};

struct CircularOrbitModel {
  Position center;
  double radius = 0.0;         // m
  double angular_speed = 0.0;  // rad/s
  double phase = 0.0;          // rad at start_time
  SimTime start_time;

  bool operator==(const CircularOrbitModel&) const = default;
};

using MobilityModel = std::variant<StaticModel, RandomWaypointModel, CircularOrbitModel>;

/// Straight-line segment followed by a pause at `end`.
struct Leg {
  Position start;
  Position end;
  SimTime depart;
  double speed = 0.0;

  /// Instant the leg reaches `end`, rounded to the nearest microsecond.
  SimTime arrival() const;
};

struct MobilityState {
  MobilityModel model;
  Leg leg;  // meaningful for RandomWaypoint only
};

/// Validates model parameters; throws std::invalid_argument on empty boxes,
/// inverted speed ranges or non-finite values.
void validate(const MobilityModel& model);

MobilityState make_static(const Position& p);
MobilityState make_orbit(const CircularOrbitModel& orbit);
/// Starts at `start` and immediately departs on a first leg drawn from `rng`.
MobilityState make_random_waypoint(const RandomWaypointModel& model, const Position& start, RandomStream& rng);

/// Exact position at `t`. Throws std::out_of_range if `t` precedes the active
/// leg (or the orbit start).
Position position_at(const MobilityState& state, SimTime t);

/// Draws the next RandomWaypoint leg. Exactly four draws in the order
/// waypoint x, y, z, speed. The new leg departs at arrival + pause.
MobilityState next_leg(const MobilityState& state, RandomStream& rng);

/// Instant at which the active leg is over and next_leg applies. SimTime::max()
/// for models without legs.
SimTime leg_complete_at(const MobilityState& state);

/**
 * Per-node trajectory that advances RandomWaypoint legs on demand.
 *
 * Queries must be made at non-decreasing times, which the event loop
 * guarantees. Leg draws depend only on the stream, never on query times.
 */
class Trajectory {
public:
  Trajectory(MobilityState initial, RandomStream rng);

  Position position(SimTime t);
  const MobilityState& state() const { return state_; }
  double max_speed() const;

private:
  MobilityState state_;
  RandomStream rng_;
};

}  // namespace fanetsim

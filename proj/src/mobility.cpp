#include "fanetsim/mobility.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fanetsim {

namespace {

bool finite(const Position& p)
{
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

Leg draw_leg(const RandomWaypointModel& model, const Position& from, SimTime depart, RandomStream& rng)
{
  const auto& b = model.bounds;
  Leg leg;
  leg.start = from;
  leg.end.x = rng.uniform(b.min.x, b.max.x);
  leg.end.y = rng.uniform(b.min.y, b.max.y);
  leg.end.z = rng.uniform(b.min.z, b.max.z);
  leg.speed = rng.uniform(model.speed_min, model.speed_max);
  leg.depart = depart;
  return leg;
}

}  // namespace

double distance(const Position& a, const Position& b)
{
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool BoundsBox::contains(const Position& p) const
{
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
}

bool BoundsBox::empty() const
{
  return !(min.x <= max.x && min.y <= max.y && min.z <= max.z);
}

SimTime Leg::arrival() const
{
  const double secs = distance(start, end) / speed;
  return depart + SimTime::micros(std::llround(secs * 1e6));
}

void validate(const MobilityModel& model)
{
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, StaticModel>) {
          if (!finite(m.position)) throw std::invalid_argument("static position must be finite");
        } else if constexpr (std::is_same_v<T, RandomWaypointModel>) {
          if (!finite(m.bounds.min) || !finite(m.bounds.max)) throw std::invalid_argument("bounds must be finite");
          if (m.bounds.empty()) throw std::invalid_argument("bounds box is empty");
          if (m.bounds.min.z < 0.0) throw std::invalid_argument("bounds must not extend below z = 0");
          if (!(m.speed_min > 0.0)) throw std::invalid_argument("speed_min must be positive");
          if (m.speed_min > m.speed_max) throw std::invalid_argument("speed_min exceeds speed_max");
          if (m.pause < SimTime{}) throw std::invalid_argument("pause must be non-negative");
          // Zero-length legs with no pause would never advance the clock.
          if (m.bounds.min == m.bounds.max && m.pause == SimTime{})
            throw std::invalid_argument("point-sized bounds need a positive pause");
        } else {
          if (!finite(m.center)) throw std::invalid_argument("orbit center must be finite");
          if (!(m.radius >= 0.0) || !std::isfinite(m.radius)) throw std::invalid_argument("orbit radius must be >= 0");
          if (!std::isfinite(m.angular_speed) || !std::isfinite(m.phase))
            throw std::invalid_argument("orbit angular speed and phase must be finite");
          if (m.center.z < 0.0) throw std::invalid_argument("orbit altitude must be >= 0");
        }
      },
      model);
}

MobilityState make_static(const Position& p)
{
  MobilityState s{StaticModel{p}, Leg{p, p, SimTime{}, 0.0}};
  return s;
}

MobilityState make_orbit(const CircularOrbitModel& orbit)
{
  validate(orbit);
  return MobilityState{orbit, Leg{}};
}

MobilityState make_random_waypoint(const RandomWaypointModel& model, const Position& start, RandomStream& rng)
{
  validate(model);
  if (!model.bounds.contains(start)) throw std::invalid_argument("random waypoint start lies outside bounds");
  return MobilityState{model, draw_leg(model, start, SimTime{}, rng)};
}

Position position_at(const MobilityState& state, SimTime t)
{
  return std::visit(
      [&](const auto& m) -> Position {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, StaticModel>) {
          return m.position;
        } else if constexpr (std::is_same_v<T, RandomWaypointModel>) {
          const Leg& leg = state.leg;
          if (t < leg.depart) {
            throw std::out_of_range("position query at t=" + std::to_string(t.us()) +
                                    "us precedes leg departure at " + std::to_string(leg.depart.us()) + "us");
          }
          const double length = distance(leg.start, leg.end);
          const double travelled = (t - leg.depart).to_seconds() * leg.speed;
          if (length == 0.0 || travelled >= length) return leg.end;
          const double f = travelled / length;
          return Position{leg.start.x + (leg.end.x - leg.start.x) * f, leg.start.y + (leg.end.y - leg.start.y) * f,
                          leg.start.z + (leg.end.z - leg.start.z) * f};
        } else {
          if (t < m.start_time) throw std::out_of_range("position query precedes orbit start");
          const double theta = m.phase + m.angular_speed * (t - m.start_time).to_seconds();
          return Position{m.center.x + m.radius * std::cos(theta), m.center.y + m.radius * std::sin(theta),
                          m.center.z};
        }
      },
      state.model);
}

MobilityState next_leg(const MobilityState& state, RandomStream& rng)
{
  const auto* model = std::get_if<RandomWaypointModel>(&state.model);
  if (model == nullptr) throw std::logic_error("next_leg requires a random waypoint model");
  const SimTime depart = state.leg.arrival() + model->pause;
  return MobilityState{state.model, draw_leg(*model, state.leg.end, depart, rng)};
}

SimTime leg_complete_at(const MobilityState& state)
{
  if (const auto* model = std::get_if<RandomWaypointModel>(&state.model)) {
    return state.leg.arrival() + model->pause;
  }
  return SimTime::max();
}

Trajectory::Trajectory(MobilityState initial, RandomStream rng) : state_(std::move(initial)), rng_(rng) {}

Position Trajectory::position(SimTime t)
{
  while (t >= leg_complete_at(state_)) {
    state_ = next_leg(state_, rng_);
  }
  return position_at(state_, t);
}

double Trajectory::max_speed() const
{
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RandomWaypointModel>) {
          return m.speed_max;
        } else if constexpr (std::is_same_v<T, CircularOrbitModel>) {
          return std::abs(m.radius * m.angular_speed);
        } else {
          return 0.0;
        }
      },
      state_.model);
}

}  // namespace fanetsim

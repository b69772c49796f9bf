#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>

namespace fanetsim {

/// Simulation time in integer microseconds since the start of a run.
class SimTime {
public:
  constexpr SimTime() = default;

  static constexpr SimTime micros(std::int64_t us) { return SimTime{us}; }
  static constexpr SimTime millis(std::int64_t ms) { return SimTime{ms * 1000}; }
  static constexpr SimTime seconds(std::int64_t s) { return SimTime{s * 1'000'000}; }
  static constexpr SimTime max() { return SimTime{std::numeric_limits<std::int64_t>::max()}; }

  constexpr std::int64_t us() const { return us_; }
  constexpr double to_seconds() const { return static_cast<double>(us_) * 1e-6; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime rhs) const { return SimTime{us_ + rhs.us_}; }
  constexpr SimTime operator-(SimTime rhs) const { return SimTime{us_ - rhs.us_}; }
  constexpr SimTime& operator+=(SimTime rhs)
  {
    us_ += rhs.us_;
    return *this;
  }

private:
  constexpr explicit SimTime(std::int64_t us) : us_(us) {}
  std::int64_t us_ = 0;
};

/// Dense index of a node inside one scenario (declaration order).
struct NodeId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const NodeId&) const = default;
};

}  // namespace fanetsim

template <>
struct std::hash<fanetsim::NodeId> {
  std::size_t operator()(fanetsim::NodeId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};

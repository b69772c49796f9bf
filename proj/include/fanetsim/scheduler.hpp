#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string_view>
#include <vector>

#include "fanetsim/sim_time.hpp"

namespace fanetsim {

using EventId = std::uint64_t;

/// Observable identity of a fired event; used for replay audits.
struct FiredEvent {
  SimTime fire_at;
  EventId seq;
  NodeId target;
  std::string_view tag;
};

/**
 * Single-threaded discrete-event queue.
 *
 * Events fire in (fire_at, seq) order where seq is the insertion counter, so
 * simultaneous events run in the order they were scheduled.
 */
class Scheduler {
public:
  using Action = std::function<void()>;
  using Observer = std::function<void(const FiredEvent&)>;

  SimTime now() const { return now_; }

  /// Throws std::logic_error when `at` lies before now().
  EventId schedule(SimTime at, NodeId target, std::string_view tag, Action action);

  /// Fires every event with fire_at <= t_end (including ones scheduled while
  /// running) and leaves the clock at t_end. Returns the number fired.
  std::size_t run_until(SimTime t_end);

  std::size_t pending() const { return queue_.size(); }
  std::uint64_t scheduled_count() const { return next_seq_; }

  void set_observer(Observer observer) { observer_ = std::move(observer); }

private:
  struct Entry {
    SimTime fire_at;
    EventId seq;
    NodeId target;
    std::string_view tag;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const
    {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  SimTime now_{};
  EventId next_seq_ = 0;
  Observer observer_;
};

}  // namespace fanetsim

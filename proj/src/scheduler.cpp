#include "fanetsim/scheduler.hpp"

#include <stdexcept>
#include <string>

namespace fanetsim {

EventId Scheduler::schedule(SimTime at, NodeId target, std::string_view tag, Action action)
{
  if (at < now_) {
    throw std::logic_error("cannot schedule event at t=" + std::to_string(at.us()) +
                           "us before now=" + std::to_string(now_.us()) + "us");
  }
  const EventId seq = next_seq_++;
  queue_.push(Entry{at, seq, target, tag, std::move(action)});
  return seq;
}

std::size_t Scheduler::run_until(SimTime t_end)
{
  if (t_end < now_) {
    throw std::logic_error("run_until target lies in the past");
  }
  std::size_t fired = 0;
  while (!queue_.empty() && queue_.top().fire_at <= t_end) {
    // priority_queue::top is const; the entry is popped before running so the
    // action may schedule freely.
    Entry entry = std::move(const_cast<Entry&>(queue_.top()));
    queue_.pop();
    now_ = entry.fire_at;
    if (observer_) {
      observer_(FiredEvent{entry.fire_at, entry.seq, entry.target, entry.tag});
    }
    entry.action();
    ++fired;
  }
  now_ = t_end;
  return fired;
}

}  // namespace fanetsim

#include <gtest/gtest.h>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fanetsim/random.hpp"
#include "fanetsim/scheduler.hpp"

namespace fanetsim {
namespace {

TEST(Scheduler, FiresInTimeOrder)
{
  Scheduler s;
  std::vector<int> fired;
  s.schedule(SimTime::micros(5), NodeId{0}, "x", [&] { fired.push_back(5); });
  s.schedule(SimTime::micros(3), NodeId{0}, "x", [&] { fired.push_back(3); });
  s.run_until(SimTime::micros(10));
  EXPECT_EQ(fired, (std::vector<int>{3, 5}));
}

TEST(Scheduler, TiesBreakByInsertionOrder)
{
  Scheduler s;
  std::string order;
  // Node ids deliberately reversed: they must not influence the order.
  s.schedule(SimTime::micros(7), NodeId{9}, "a", [&] { order += 'A'; });
  s.schedule(SimTime::micros(7), NodeId{1}, "b", [&] { order += 'B'; });
  s.run_until(SimTime::micros(7));
  EXPECT_EQ(order, "AB");
}

TEST(Scheduler, SchedulingIntoThePastThrows)
{
  Scheduler s;
  s.run_until(SimTime::micros(4));
  EXPECT_THROW(s.schedule(SimTime::micros(2), NodeId{0}, "x", [] {}), std::logic_error);
  EXPECT_NO_THROW(s.schedule(SimTime::micros(4), NodeId{0}, "x", [] {}));
}

TEST(Scheduler, EmptyRunAdvancesClock)
{
  Scheduler s;
  EXPECT_EQ(s.run_until(SimTime::micros(10)), 0u);
  EXPECT_EQ(s.now(), SimTime::micros(10));
}

TEST(Scheduler, RunUntilIncludesBoundary)
{
  Scheduler s;
  for (int t : {1, 2, 3}) s.schedule(SimTime::micros(t), NodeId{0}, "x", [] {});
  EXPECT_EQ(s.run_until(SimTime::micros(2)), 2u);
  EXPECT_EQ(s.pending(), 1u);
  EXPECT_EQ(s.now(), SimTime::micros(2));
}

TEST(Scheduler, CascadingEventsInsideWindowFire)
{
  Scheduler s;
  int count = 0;
  s.schedule(SimTime::micros(1), NodeId{0}, "x", [&] {
    ++count;
    s.schedule(s.now() + SimTime::micros(1), NodeId{0}, "y", [&] { ++count; });
  });
  EXPECT_EQ(s.run_until(SimTime::micros(5)), 2u);
  EXPECT_EQ(count, 2);
}

TEST(Scheduler, RunUntilIntoThePastThrows)
{
  Scheduler s;
  s.run_until(SimTime::micros(5));
  EXPECT_THROW(s.run_until(SimTime::micros(1)), std::logic_error);
}

// Random schedules with cascades: nothing inside the window is lost, nothing
// outside fires, and observed times never decrease.
TEST(Scheduler, PropertyNoLossAndMonotoneClock)
{
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    RandomStream rng(seed, NodeId{0}, "scheduler-test");
    Scheduler s;
    const SimTime end = SimTime::micros(1000);
    std::int64_t expected_in_window = 0;
    std::int64_t fired = 0;
    SimTime last{};
    bool monotone = true;
    s.set_observer([&](const FiredEvent& e) {
      monotone = monotone && e.fire_at >= last;
      last = e.fire_at;
    });
    std::function<void(int)> spawn = [&](int depth) {
      const auto at = s.now() + SimTime::micros(static_cast<std::int64_t>(rng.below(400)));
      if (at <= end) ++expected_in_window;
      s.schedule(at, NodeId{static_cast<std::uint32_t>(rng.below(5))}, "p", [&, depth] {
        ++fired;
        if (depth < 3 && rng.below(2) == 0) spawn(depth + 1);
      });
    };
    for (int i = 0; i < 40; ++i) spawn(0);
    s.run_until(end);
    EXPECT_TRUE(monotone) << "seed " << seed;
    EXPECT_EQ(fired, expected_in_window) << "seed " << seed;
  }
}

}  // namespace
}  // namespace fanetsim

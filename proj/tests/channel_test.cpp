#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fanetsim/channel.hpp"

namespace fanetsim::channel {
namespace {

// Oracle: root of f on [lo, hi] by plain bisection, f(lo) > 0 > f(hi).
template <typename F>
double bisect(F f, double lo, double hi)
{
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Free-space reference loss written out from first principles.
double oracle_snr(double d)
{
  const double c = 2.998e8;
  const double lambda = c / 5.9e9;
  const double pl0 = 20.0 * std::log10(4.0 * std::numbers::pi * 1.0 / lambda);
  return 23.0 - (pl0 + 10.0 * 2.75 * std::log10(std::max(d, 1.0))) + 95.0;
}

TEST(Channel, ReferenceValues)
{
  const ChannelParams p;
  EXPECT_NEAR(reference_loss_db(p), 47.86, 0.01);
  EXPECT_NEAR(path_loss_db(p, 100.0), 102.86, 0.01);
  EXPECT_NEAR(snr_db(p, 100.0), 15.14, 0.01);
  EXPECT_NEAR(snr_db(p, 1.0), 70.14, 0.01);
  for (double d : {1.0, 10.0, 99.0, 233.0, 1234.5}) EXPECT_NEAR(snr_db(p, d), oracle_snr(d), 1e-9);
}

TEST(Channel, DecodeRangeAgreesWithBisection)
{
  const ChannelParams p;
  const double oracle = bisect([](double d) { return oracle_snr(d) - 5.0; }, 1.0, 10000.0);
  EXPECT_NEAR(oracle, 233.7, 0.1);
  EXPECT_GE(snr_db(p, oracle - 0.05), p.snr_threshold);
  EXPECT_LT(snr_db(p, oracle + 0.05), p.snr_threshold);
  EXPECT_NEAR(snr_db(p, oracle), 5.0, 0.01);
}

TEST(Channel, LossClampsInsideReferenceDistance)
{
  const ChannelParams p;
  EXPECT_DOUBLE_EQ(path_loss_db(p, 0.25), reference_loss_db(p));
  EXPECT_THROW(path_loss_db(p, 0.0), std::domain_error);
  EXPECT_THROW(path_loss_db(p, -1.0), std::domain_error);
}

TEST(Channel, SnrDecreasesWithDistance)
{
  const ChannelParams p;
  double prev = snr_db(p, 1.0);
  for (double d = 1.5; d < 5000.0; d *= 1.3) {
    const double s = snr_db(p, d);
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(Channel, Delays)
{
  const ChannelParams p;
  EXPECT_EQ(tx_delay(1452, p).us(), 1000);
  EXPECT_EQ(tx_delay(0, p).us(), 32);
  EXPECT_EQ(tx_delay(1, p).us(), 33);  // 392 bits -> 32.67 us, rounded up
  EXPECT_EQ(prop_delay(100.0, p).us(), 0);
  EXPECT_EQ(prop_delay(300.0, p).us(), 1);
  EXPECT_EQ(prop_delay(233.0, p).us(), 1);
  EXPECT_THROW(tx_delay(-1, p), std::invalid_argument);
}

TEST(Channel, BroadcastGatesOnRange)
{
  const ChannelParams p;
  const std::vector<Position> pos{{0, 0, 0}, {100, 0, 0}, {300, 0, 0}};
  RandomStream rng(1, NodeId{0}, "channel");
  const auto rx = broadcast(NodeId{0}, pos, SimTime::millis(5), 1452, p, rng);
  ASSERT_EQ(rx.size(), 2u);
  EXPECT_EQ(rx[0].rx, NodeId{1});
  EXPECT_EQ(rx[0].outcome, Outcome::Delivered);
  EXPECT_EQ(rx[0].arrive_at, SimTime::millis(5) + SimTime::micros(1000));
  EXPECT_EQ(rx[1].rx, NodeId{2});
  EXPECT_EQ(rx[1].outcome, Outcome::RangeDrop);
}

TEST(Channel, CertainLossDropsEverythingInRange)
{
  ChannelParams p;
  p.extra_loss_prob = 1.0;
  const std::vector<Position> pos{{0, 0, 0}, {50, 0, 0}, {100, 0, 0}, {900, 0, 0}};
  RandomStream rng(1, NodeId{0}, "channel");
  const auto rx = broadcast(NodeId{0}, pos, SimTime{}, 10, p, rng);
  EXPECT_EQ(rx[0].outcome, Outcome::LossDrop);
  EXPECT_EQ(rx[1].outcome, Outcome::LossDrop);
  EXPECT_EQ(rx[2].outcome, Outcome::RangeDrop);
}

TEST(Channel, LossRateMatchesProbability)
{
  ChannelParams p;
  p.extra_loss_prob = 0.2;
  const std::vector<Position> pos{{0, 0, 0}, {50, 0, 0}};
  RandomStream rng(8, NodeId{0}, "channel");
  int lost = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) lost += unicast(NodeId{0}, NodeId{1}, pos, SimTime{}, 10, p, rng).outcome == Outcome::LossDrop;
  EXPECT_NEAR(static_cast<double>(lost) / n, 0.2, 0.01);
}

TEST(Channel, LinkIsSymmetric)
{
  const ChannelParams p;
  const std::vector<Position> pos{{0, 0, 0}, {120, 80, 40}};
  RandomStream a(1, NodeId{0}, "channel");
  RandomStream b(1, NodeId{1}, "channel");
  const auto ab = unicast(NodeId{0}, NodeId{1}, pos, SimTime{}, 100, p, a);
  const auto ba = unicast(NodeId{1}, NodeId{0}, pos, SimTime{}, 100, p, b);
  EXPECT_DOUBLE_EQ(ab.snr, ba.snr);
  EXPECT_EQ(ab.outcome, ba.outcome);
  EXPECT_EQ(ab.arrive_at, ba.arrive_at);
}

TEST(Channel, ValidateRejectsBadParams)
{
  ChannelParams p;
  p.extra_loss_prob = 1.5;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = ChannelParams{};
  p.bitrate = 0.0;
  EXPECT_THROW(validate(p), std::invalid_argument);
  EXPECT_NO_THROW(validate(ChannelParams{}));
}

}  // namespace
}  // namespace fanetsim::channel

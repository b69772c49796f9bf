#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fanetsim/mobility.hpp"
#include "fanetsim/random.hpp"
#include "fanetsim/sim_time.hpp"

namespace fanetsim::channel {

/// Bytes added to every payload on the air (named-data + link headers).
inline constexpr std::int64_t kHeaderOverheadBytes = 48;

/// Log-distance link budget for the abstract sidelink.
struct ChannelParams {
  double carrier_freq = 5.9e9;     // Hz
  double ref_dist = 1.0;           // m
  double pathloss_exponent = 2.75;
  double tx_power = 23.0;          // dBm
  double noise_floor = -95.0;      // dBm
  double snr_threshold = 5.0;      // dB
  double bitrate = 12e6;           // bit/s
  double extra_loss_prob = 0.0;
  double propagation_speed = 2.998e8;  // m/s

  bool operator==(const ChannelParams&) const = default;
};

/// Throws std::invalid_argument listing the first violated constraint.
void validate(const ChannelParams& params);

/// Free-space loss at the reference distance.
double reference_loss_db(const ChannelParams& params);
/// PL(d) = PL0 + 10 n log10(d / d0), clamped to PL0 below d0. Throws for d <= 0.
double path_loss_db(const ChannelParams& params, double d);
double snr_db(const ChannelParams& params, double d);

SimTime tx_delay(std::int64_t payload_bytes, const ChannelParams& params);
SimTime prop_delay(double d, const ChannelParams& params);

enum class Outcome { Delivered, RangeDrop, LossDrop };

struct Reception {
  NodeId rx;
  Outcome outcome = Outcome::Delivered;
  SimTime arrive_at;  // valid when delivered
  double snr = 0.0;
};

/**
 * Evaluates a broadcast from `tx` at time `t`.
 *
 * Geometry is sampled once at `t`. Every node other than `tx` gets an entry in
 * node order; one loss draw is consumed per receiver that passes the SNR gate.
 */
std::vector<Reception> broadcast(NodeId tx, std::span<const Position> positions, SimTime t,
                                 std::int64_t payload_bytes, const ChannelParams& params, RandomStream& rng);

/// Link-layer unicast: same gate as broadcast but only `dest` is evaluated.
Reception unicast(NodeId tx, NodeId dest, std::span<const Position> positions, SimTime t,
                  std::int64_t payload_bytes, const ChannelParams& params, RandomStream& rng);

}  // namespace fanetsim::channel

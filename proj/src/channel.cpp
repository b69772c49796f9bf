#include "fanetsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fanetsim::channel {

namespace {

// ceil() of a quotient that should be integral but may carry rounding noise.
std::int64_t ceil_micros(double us)
{
  const double nearest = std::nearbyint(us);
  if (std::abs(us - nearest) <= 1e-9 * std::max(1.0, std::abs(us))) return static_cast<std::int64_t>(nearest);
  return static_cast<std::int64_t>(std::ceil(us));
}

Reception evaluate(NodeId rx, double d, SimTime t, std::int64_t payload_bytes, const ChannelParams& params,
                   RandomStream& rng)
{
  Reception r;
  r.rx = rx;
  r.snr = snr_db(params, std::max(d, 1e-9));
  if (r.snr < params.snr_threshold) {
    r.outcome = Outcome::RangeDrop;
    return r;
  }
  if (rng.uniform01() < params.extra_loss_prob) {
    r.outcome = Outcome::LossDrop;
    return r;
  }
  r.outcome = Outcome::Delivered;
  r.arrive_at = t + tx_delay(payload_bytes, params) + prop_delay(d, params);
  return r;
}

}  // namespace

void validate(const ChannelParams& p)
{
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(std::isfinite(p.carrier_freq) && p.carrier_freq > 0.0, "carrier_freq must be positive");
  require(std::isfinite(p.ref_dist) && p.ref_dist > 0.0, "ref_dist must be positive");
  require(std::isfinite(p.pathloss_exponent) && p.pathloss_exponent > 0.0, "pathloss_exponent must be positive");
  require(std::isfinite(p.tx_power), "tx_power must be finite");
  require(std::isfinite(p.noise_floor), "noise_floor must be finite");
  require(std::isfinite(p.snr_threshold), "snr_threshold must be finite");
  require(std::isfinite(p.bitrate) && p.bitrate > 0.0, "bitrate must be positive");
  require(p.extra_loss_prob >= 0.0 && p.extra_loss_prob <= 1.0, "extra_loss_prob must lie in [0, 1]");
  require(std::isfinite(p.propagation_speed) && p.propagation_speed > 0.0, "propagation_speed must be positive");
}

double reference_loss_db(const ChannelParams& p)
{
  return 20.0 * std::log10(4.0 * std::numbers::pi * p.ref_dist * p.carrier_freq / p.propagation_speed);
}

double path_loss_db(const ChannelParams& p, double d)
{
  if (!(d > 0.0)) throw std::domain_error("path loss requires a positive distance");
  const double pl0 = reference_loss_db(p);
  if (d <= p.ref_dist) return pl0;
  return pl0 + 10.0 * p.pathloss_exponent * std::log10(d / p.ref_dist);
}

double snr_db(const ChannelParams& p, double d)
{
  return p.tx_power - path_loss_db(p, d) - p.noise_floor;
}

SimTime tx_delay(std::int64_t payload_bytes, const ChannelParams& p)
{
  if (payload_bytes < 0) throw std::invalid_argument("payload_bytes must be non-negative");
  const double bits = 8.0 * static_cast<double>(payload_bytes + kHeaderOverheadBytes);
  return SimTime::micros(ceil_micros(bits / p.bitrate * 1e6));
}

SimTime prop_delay(double d, const ChannelParams& p)
{
  return SimTime::micros(std::llround(d / p.propagation_speed * 1e6));
}

std::vector<Reception> broadcast(NodeId tx, std::span<const Position> positions, SimTime t,
                                 std::int64_t payload_bytes, const ChannelParams& params, RandomStream& rng)
{
  std::vector<Reception> out;
  out.reserve(positions.size());
  const Position& from = positions[tx.value];
  for (std::uint32_t i = 0; i < positions.size(); ++i) {
    if (i == tx.value) continue;
    out.push_back(evaluate(NodeId{i}, distance(from, positions[i]), t, payload_bytes, params, rng));
  }
  return out;
}

Reception unicast(NodeId tx, NodeId dest, std::span<const Position> positions, SimTime t,
                  std::int64_t payload_bytes, const ChannelParams& params, RandomStream& rng)
{
  if (dest == tx) throw std::invalid_argument("unicast to self");
  return evaluate(dest, distance(positions[tx.value], positions[dest.value]), t, payload_bytes, params, rng);
}

}  // namespace fanetsim::channel

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fanetsim/trace.hpp"

namespace fanetsim::metrics {

/// Identifies one measurement series: traffic from `origin` as seen by the
/// `subscriber`'s subscription (or query) `expr`.
struct FlowKey {
  NodeId origin;
  NodeId subscriber;
  std::string expr;

  auto operator<=>(const FlowKey&) const = default;
};

enum class FlowKind { Publish, Query };

/// Half-open [t0, t1).
struct Window {
  SimTime t0;
  SimTime t1;
};

struct LatencyStats {
  double mean = 0.0;
  std::int64_t p50 = 0;
  std::int64_t p95 = 0;
  std::int64_t max = 0;
};

struct Sample {
  MsgId msg;
  SimTime sent;
  SimTime received;
  std::int64_t payload_bytes = 0;
  int hops = 0;
};

struct FlowSeries {
  FlowKey key;
  FlowKind kind = FlowKind::Publish;
  std::int64_t expected = 0;    // published (or issued) messages that should reach the flow
  std::vector<Sample> samples;  // first delivery per message, ordered by send time
};

/// Nearest-rank percentile (1..100) of a sorted, non-empty list.
std::int64_t nearest_rank(std::span<const std::int64_t> sorted, int percentile);
/// nullopt for an empty list.
std::optional<LatencyStats> latency_stats(std::vector<std::int64_t> latencies);

/// RFC 3550 interarrival jitter over (send, receive) pairs in send order;
/// nullopt with fewer than two samples.
std::optional<double> rfc3550_jitter(std::span<const Sample> samples);

/// Every flow implied by the trace header's subscriptions and queries.
std::vector<FlowSeries> extract_flows(const Trace& trace);
std::optional<FlowSeries> find_flow(const Trace& trace, const FlowKey& key);

std::optional<LatencyStats> latency_stats(const Trace& trace, const FlowKey& flow);
std::optional<double> jitter(const Trace& trace, const FlowKey& flow);
/// Goodput of the flow in bits/s; throws std::invalid_argument if t1 <= t0.
double throughput(const Trace& trace, const FlowKey& flow, Window window);
/// nullopt when nothing was expected on the flow.
std::optional<double> delivery_ratio(const Trace& trace, const FlowKey& flow);
std::map<int, std::int64_t> hop_histogram(const Trace& trace, const FlowKey& flow);

/// Bits/s carried by Send events in the window, headers included.
double on_air_load(const Trace& trace, Window window);
/// Goodput over raw (payload bytes, time) deliveries.
double goodput_bps(std::span<const Sample> samples, Window window);

/// First beacon reception at which every node's live neighbor set equals the
/// in-range set observed from beacon transmissions; nullopt if never.
std::optional<SimTime> discovery_convergence(const Trace& trace);

/// Whole-trace window: [0, duration).
Window default_window(const Trace& trace);

/// Summary document with `aggregate` and `flows` blocks. With `only`, the
/// flows array is restricted to that flow.
nlohmann::ordered_json summarize(const Trace& trace, std::optional<Window> window = std::nullopt,
                                 const std::optional<FlowKey>& only = std::nullopt);
/// summarize(...) rendered exactly as written to summary files.
std::string render_summary(const nlohmann::ordered_json& summary);

}  // namespace fanetsim::metrics

#include "fanetsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "fanetsim/channel.hpp"
#include "fanetsim/key_expr.hpp"

namespace fanetsim::metrics {

using json = nlohmann::ordered_json;

namespace {

bool is_origin_send(const TraceRecord& r, MessageKind kind)
{
  return r.event == TraceEvent::Send && r.kind == kind && r.node == r.msg.origin && r.hops_taken == 0;
}

bool in_window(SimTime t, const Window& w) { return t >= w.t0 && t < w.t1; }

void check_window(const Window& w)
{
  if (w.t1 <= w.t0) throw std::invalid_argument("throughput window must satisfy t1 > t0");
}

double bits_per_second(double bits, const Window& w)
{
  return bits / ((w.t1 - w.t0).to_seconds());
}

json stats_json(const std::optional<LatencyStats>& s)
{
  if (!s) return nullptr;
  return json{{"mean", s->mean}, {"p50", s->p50}, {"p95", s->p95}, {"max", s->max}};
}

json histogram_json(const std::map<int, std::int64_t>& h)
{
  json j = json::object();
  for (const auto& [hops, count] : h) j[std::to_string(hops)] = count;
  return j;
}

std::map<int, std::int64_t> histogram_of(std::span<const Sample> samples)
{
  std::map<int, std::int64_t> h;
  for (const auto& s : samples) ++h[s.hops];
  return h;
}

std::vector<std::int64_t> latencies_of(std::span<const Sample> samples)
{
  std::vector<std::int64_t> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back((s.received - s.sent).us());
  return out;
}

std::optional<double> ratio_of(const FlowSeries& f)
{
  if (f.expected == 0) return std::nullopt;
  return static_cast<double>(f.samples.size()) / static_cast<double>(f.expected);
}

template <typename T>
json optional_json(const std::optional<T>& v)
{
  if (!v) return nullptr;
  return *v;
}

}  // namespace

std::int64_t nearest_rank(std::span<const std::int64_t> sorted, int percentile)
{
  if (sorted.empty()) throw std::invalid_argument("nearest_rank of an empty list");
  const auto n = static_cast<std::int64_t>(sorted.size());
  // rank = ceil(p/100 * n), computed in integers.
  std::int64_t rank = (static_cast<std::int64_t>(percentile) * n + 99) / 100;
  rank = std::clamp<std::int64_t>(rank, 1, n);
  return sorted[static_cast<std::size_t>(rank - 1)];
}

std::optional<LatencyStats> latency_stats(std::vector<std::int64_t> latencies)
{
  if (latencies.empty()) return std::nullopt;
  std::sort(latencies.begin(), latencies.end());
  LatencyStats s;
  const long double sum = std::accumulate(latencies.begin(), latencies.end(), 0.0L);
  s.mean = static_cast<double>(sum / static_cast<long double>(latencies.size()));
  s.p50 = nearest_rank(latencies, 50);
  s.p95 = nearest_rank(latencies, 95);
  s.max = latencies.back();
  return s;
}

std::optional<double> rfc3550_jitter(std::span<const Sample> samples)
{
  if (samples.size() < 2) return std::nullopt;
  double j = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const auto dr = (samples[i].received - samples[i - 1].received).us();
    const auto ds = (samples[i].sent - samples[i - 1].sent).us();
    const double d = static_cast<double>(dr - ds);
    j += (std::abs(d) - j) / 16.0;
  }
  return j;
}

std::vector<FlowSeries> extract_flows(const Trace& trace)
{
  struct Published {
    MsgId id;
    KeyExpr key;
  };
  std::map<NodeId, std::vector<Published>> publishes;
  std::map<MsgId, SimTime> query_sent;
  std::map<std::pair<NodeId, std::string>, std::int64_t> queries_issued;

  for (const auto& r : trace.records) {
    if (is_origin_send(r, MessageKind::Publish)) {
      publishes[r.node].push_back(Published{r.msg, KeyExpr::parse(r.key)});
    } else if (is_origin_send(r, MessageKind::Query)) {
      if (query_sent.emplace(r.msg, r.origin_time).second) ++queries_issued[{r.node, r.key}];
    }
  }

  std::map<std::pair<FlowKind, FlowKey>, FlowSeries> flows;
  for (const auto& sub : trace.header.subscriptions) {
    const KeyExpr expr = KeyExpr::parse(sub.expr);
    for (const auto& [origin, list] : publishes) {
      const auto n = std::count_if(list.begin(), list.end(), [&](const Published& p) { return key_expr_match(expr, p.key); });
      if (n == 0) continue;
      FlowKey key{origin, sub.node, sub.expr};
      auto& f = flows[{FlowKind::Publish, key}];
      f.key = key;
      f.kind = FlowKind::Publish;
      f.expected = n;
    }
  }

  std::set<std::pair<FlowKey, MsgId>> counted;
  std::set<std::pair<FlowKey, MsgId>> query_counted;
  for (const auto& r : trace.records) {
    if (r.event != TraceEvent::Deliver) continue;
    if (r.kind == MessageKind::Publish) {
      FlowKey key{r.msg.origin, r.node, r.expr};
      auto it = flows.find({FlowKind::Publish, key});
      if (it == flows.end() || !counted.insert({key, r.msg}).second) continue;
      it->second.samples.push_back(Sample{r.msg, r.origin_time, r.t, r.payload_bytes, r.hops_taken});
    } else if (r.kind == MessageKind::Reply && r.ref) {
      const auto sent = query_sent.find(*r.ref);
      if (sent == query_sent.end()) continue;
      FlowKey key{r.msg.origin, r.node, r.expr};
      if (!query_counted.insert({key, *r.ref}).second) continue;
      auto& f = flows[{FlowKind::Query, key}];
      if (f.samples.empty()) {
        f.key = key;
        f.kind = FlowKind::Query;
        const auto issued = queries_issued.find({r.node, r.expr});
        f.expected = issued == queries_issued.end() ? 0 : issued->second;
      }
      f.samples.push_back(Sample{*r.ref, sent->second, r.t, r.payload_bytes, r.hops_taken});
    }
  }

  std::vector<FlowSeries> out;
  out.reserve(flows.size());
  for (auto& [key, f] : flows) {
    std::stable_sort(f.samples.begin(), f.samples.end(), [](const Sample& a, const Sample& b) {
      if (a.sent != b.sent) return a.sent < b.sent;
      return a.msg < b.msg;
    });
    out.push_back(std::move(f));
  }
  return out;
}

std::optional<FlowSeries> find_flow(const Trace& trace, const FlowKey& key)
{
  for (auto& f : extract_flows(trace)) {
    if (f.key == key) return std::move(f);
  }
  return std::nullopt;
}

std::optional<LatencyStats> latency_stats(const Trace& trace, const FlowKey& flow)
{
  const auto f = find_flow(trace, flow);
  if (!f) return std::nullopt;
  return latency_stats(latencies_of(f->samples));
}

std::optional<double> jitter(const Trace& trace, const FlowKey& flow)
{
  const auto f = find_flow(trace, flow);
  if (!f) return std::nullopt;
  return rfc3550_jitter(f->samples);
}

double goodput_bps(std::span<const Sample> samples, Window window)
{
  check_window(window);
  std::int64_t bytes = 0;
  for (const auto& s : samples) {
    if (in_window(s.received, window)) bytes += s.payload_bytes;
  }
  return bits_per_second(8.0 * static_cast<double>(bytes), window);
}

double throughput(const Trace& trace, const FlowKey& flow, Window window)
{
  check_window(window);
  const auto f = find_flow(trace, flow);
  if (!f) return 0.0;
  return goodput_bps(f->samples, window);
}

std::optional<double> delivery_ratio(const Trace& trace, const FlowKey& flow)
{
  const auto f = find_flow(trace, flow);
  if (!f) return std::nullopt;
  return ratio_of(*f);
}

std::map<int, std::int64_t> hop_histogram(const Trace& trace, const FlowKey& flow)
{
  const auto f = find_flow(trace, flow);
  if (!f) return {};
  return histogram_of(f->samples);
}

double on_air_load(const Trace& trace, Window window)
{
  check_window(window);
  std::int64_t bytes = 0;
  for (const auto& r : trace.records) {
    if (r.event == TraceEvent::Send && in_window(r.t, window)) bytes += r.payload_bytes + channel::kHeaderOverheadBytes;
  }
  return bits_per_second(8.0 * static_cast<double>(bytes), window);
}

std::optional<SimTime> discovery_convergence(const Trace& trace)
{
  const std::size_t n = trace.header.nodes.size();
  if (n < 2) return SimTime{};
  const SimTime expiry = SimTime::micros(3 * trace.header.beacon_interval.us());
  std::vector<std::vector<std::optional<SimTime>>> heard(n, std::vector<std::optional<SimTime>>(n));
  std::vector<std::vector<std::optional<bool>>> in_range(n, std::vector<std::optional<bool>>(n));

  auto converged = [&](SimTime now) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        if (!in_range[a][b]) return false;
        const bool live = heard[a][b] && now - *heard[a][b] <= expiry;
        if (live != *in_range[a][b]) return false;
      }
    }
    return true;
  };

  for (const auto& r : trace.records) {
    if (r.kind != MessageKind::Beacon) continue;
    const std::size_t origin = r.msg.origin.value;
    const std::size_t node = r.node.value;
    switch (r.event) {
      case TraceEvent::Send:
        for (std::size_t other = 0; other < n; ++other) {
          if (other == origin) continue;
          in_range[origin][other] = true;
          in_range[other][origin] = true;
        }
        break;
      case TraceEvent::RangeDrop:
        in_range[origin][node] = false;
        in_range[node][origin] = false;
        break;
      case TraceEvent::Recv:
        heard[node][origin] = r.t;
        if (converged(r.t)) return r.t;
        break;
      default:
        break;
    }
  }
  return std::nullopt;
}

Window default_window(const Trace& trace)
{
  return Window{SimTime{}, trace.header.duration};
}

json summarize(const Trace& trace, std::optional<Window> window, const std::optional<FlowKey>& only)
{
  const Window w = window.value_or(default_window(trace));
  check_window(w);
  const auto& names = trace.header.nodes;
  const auto flows = extract_flows(trace);

  std::map<TraceEvent, std::int64_t> events;
  std::int64_t published = 0;
  std::int64_t queries = 0;
  std::vector<Sample> delivered_all;
  for (const auto& r : trace.records) {
    ++events[r.event];
    if (is_origin_send(r, MessageKind::Publish)) ++published;
    if (is_origin_send(r, MessageKind::Query)) ++queries;
    if (r.event == TraceEvent::Deliver) delivered_all.push_back(Sample{r.msg, r.origin_time, r.t, r.payload_bytes, r.hops_taken});
  }

  std::int64_t expected = 0;
  std::int64_t delivered = 0;
  std::vector<Sample> publish_samples;
  for (const auto& f : flows) {
    if (f.kind != FlowKind::Publish) continue;
    expected += f.expected;
    delivered += static_cast<std::int64_t>(f.samples.size());
    publish_samples.insert(publish_samples.end(), f.samples.begin(), f.samples.end());
  }

  json agg;
  agg["published"] = published;
  agg["queries"] = queries;
  json counts = json::object();
  for (auto ev : {TraceEvent::Send, TraceEvent::Recv, TraceEvent::Deliver, TraceEvent::DupDrop, TraceEvent::RangeDrop,
                  TraceEvent::LossDrop, TraceEvent::Expire, TraceEvent::Invalid}) {
    const auto it = events.find(ev);
    counts[std::string(to_string(ev))] = it == events.end() ? 0 : it->second;
  }
  agg["events"] = counts;
  agg["expected_deliveries"] = expected;
  agg["deliveries"] = delivered;
  agg["delivery_ratio"] = expected == 0 ? json(nullptr) : json(static_cast<double>(delivered) / static_cast<double>(expected));
  agg["latency_us"] = stats_json(latency_stats(latencies_of(publish_samples)));
  agg["goodput_bps"] = goodput_bps(delivered_all, w);
  agg["on_air_bps"] = on_air_load(trace, w);
  agg["hop_histogram"] = histogram_json(histogram_of(publish_samples));
  const auto conv = discovery_convergence(trace);
  agg["discovery_convergence_us"] = conv ? json(conv->us()) : json(nullptr);

  json flow_arr = json::array();
  for (const auto& f : flows) {
    if (only && f.key != *only) continue;
    json jf;
    jf["origin"] = names.at(f.key.origin.value);
    jf["subscriber"] = names.at(f.key.subscriber.value);
    jf["expr"] = f.key.expr;
    jf["kind"] = f.kind == FlowKind::Publish ? "publish" : "query";
    jf["expected"] = f.expected;
    jf["delivered"] = static_cast<std::int64_t>(f.samples.size());
    jf["delivery_ratio"] = optional_json(ratio_of(f));
    jf["latency_us"] = stats_json(latency_stats(latencies_of(f.samples)));
    jf["jitter_us"] = optional_json(rfc3550_jitter(f.samples));
    jf["throughput_bps"] = goodput_bps(f.samples, w);
    jf["hop_histogram"] = histogram_json(histogram_of(f.samples));
    flow_arr.push_back(std::move(jf));
  }

  json out;
  out["window_us"] = json::array({w.t0.us(), w.t1.us()});
  out["aggregate"] = std::move(agg);
  out["flows"] = std::move(flow_arr);
  return out;
}

std::string render_summary(const json& summary)
{
  return summary.dump(2) + "\n";
}

}  // namespace fanetsim::metrics

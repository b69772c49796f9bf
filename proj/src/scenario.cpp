#include "fanetsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>

#include <openssl/evp.h>

#include "fanetsim/errors.hpp"

namespace fanetsim {

using json = nlohmann::ordered_json;

namespace {

std::string join(const std::vector<ValidationError>& errors)
{
  std::string s = "invalid scenario:";
  for (const auto& e : errors) s += "\n  " + e.location + ": " + e.message;
  return s;
}

bool valid_node_id(std::string_view id)
{
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

/// Typed field access that records problems instead of throwing.
class Checker {
public:
  std::vector<ValidationError> errors;

  void fail(std::string location, std::string message) { errors.push_back({std::move(location), std::move(message)}); }

  bool object(const json& j, const std::string& loc)
  {
    if (j.is_object()) return true;
    fail(loc, "expected an object");
    return false;
  }

  void only(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& loc)
  {
    for (const auto& [k, v] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) fail(at(loc, k), "unknown field");
    }
  }

  static std::string at(const std::string& loc, std::string_view field)
  {
    return loc.empty() ? std::string(field) : loc + "." + std::string(field);
  }

  const json* field(const json& obj, std::string_view name, const std::string& loc, bool required)
  {
    const auto it = obj.find(name);
    if (it == obj.end()) {
      if (required) fail(at(loc, name), "missing required field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& obj, std::string_view name, const std::string& loc, bool required = false)
  {
    const json* v = field(obj, name, loc, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) {
      fail(at(loc, name), "expected a number");
      return std::nullopt;
    }
    const double d = v->get<double>();
    if (!std::isfinite(d)) {
      fail(at(loc, name), "must be finite");
      return std::nullopt;
    }
    return d;
  }

  std::optional<std::int64_t> integer(const json& obj, std::string_view name, const std::string& loc,
                                      bool required = false)
  {
    const json* v = field(obj, name, loc, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer()) {
      fail(at(loc, name), "expected an integer");
      return std::nullopt;
    }
    if (v->is_number_unsigned() && v->get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      fail(at(loc, name), "integer out of range");
      return std::nullopt;
    }
    return v->get<std::int64_t>();
  }

  std::optional<std::int64_t> millis(const json& obj, std::string_view name, const std::string& loc,
                                     bool required = false)
  {
    auto v = integer(obj, name, loc, required);
    if (v && (*v < 0 || *v > INT64_MAX / 1000)) {
      fail(at(loc, name), "time must be a non-negative number of milliseconds");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::string> string(const json& obj, std::string_view name, const std::string& loc,
                                    bool required = false)
  {
    const json* v = field(obj, name, loc, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) {
      fail(at(loc, name), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<Position> position(const json& obj, std::string_view name, const std::string& loc,
                                   bool required = false)
  {
    const json* v = field(obj, name, loc, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_array() || v->size() != 3 ||
        !std::all_of(v->begin(), v->end(), [](const json& e) { return e.is_number(); })) {
      fail(at(loc, name), "expected [x, y, z] in meters");
      return std::nullopt;
    }
    Position p{(*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<double>()};
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      fail(at(loc, name), "coordinates must be finite");
      return std::nullopt;
    }
    return p;
  }

  std::optional<KeyExpr> key_expr(const json& obj, std::string_view name, const std::string& loc)
  {
    const auto text = string(obj, name, loc, true);
    if (!text) return std::nullopt;
    try {
      return KeyExpr::parse(*text);
    } catch (const KeyExprError& e) {
      fail(at(loc, name), e.what());
      return std::nullopt;
    }
  }
};

void read_channel(Checker& c, const json& j, channel::ChannelParams& p)
{
  const std::string loc = "channel";
  if (!c.object(j, loc)) return;
  c.only(j,
         {"carrier_freq_hz", "ref_dist_m", "pathloss_exponent", "tx_power_dbm", "noise_floor_dbm", "snr_threshold_db",
          "bitrate_bps", "extra_loss_prob", "propagation_speed_mps"},
         loc);
  auto set = [&](std::string_view name, double& dst) {
    if (auto v = c.number(j, name, loc)) dst = *v;
  };
  set("carrier_freq_hz", p.carrier_freq);
  set("ref_dist_m", p.ref_dist);
  set("pathloss_exponent", p.pathloss_exponent);
  set("tx_power_dbm", p.tx_power);
  set("noise_floor_dbm", p.noise_floor);
  set("snr_threshold_db", p.snr_threshold);
  set("bitrate_bps", p.bitrate);
  set("extra_loss_prob", p.extra_loss_prob);
  set("propagation_speed_mps", p.propagation_speed);
  try {
    channel::validate(p);
  } catch (const std::invalid_argument& e) {
    c.fail(loc, e.what());
  }
}

void read_protocol(Checker& c, const json& j, ProtocolParams& p)
{
  const std::string loc = "protocol";
  if (!c.object(j, loc)) return;
  c.only(j, {"hop_limit", "beacon_interval_ms", "pit_lifetime_ms", "cs_capacity", "seen_set_capacity", "pit_capacity"},
         loc);
  if (auto v = c.integer(j, "hop_limit", loc)) {
    if (*v < 1 || *v > 255)
      c.fail(Checker::at(loc, "hop_limit"), "must lie in [1, 255]");
    else
      p.hop_limit = static_cast<int>(*v);
  }
  if (auto v = c.millis(j, "beacon_interval_ms", loc)) p.beacon_interval = SimTime::millis(*v);
  if (auto v = c.millis(j, "pit_lifetime_ms", loc)) p.pit_lifetime = SimTime::millis(*v);
  auto capacity = [&](std::string_view name, std::size_t& dst, bool allow_zero) {
    if (auto v = c.integer(j, name, loc)) {
      if (*v < (allow_zero ? 0 : 1))
        c.fail(Checker::at(loc, name), allow_zero ? "must be >= 0" : "must be >= 1");
      else
        dst = static_cast<std::size_t>(*v);
    }
  };
  capacity("cs_capacity", p.cs_capacity, true);
  capacity("seen_set_capacity", p.seen_set_capacity, false);
  capacity("pit_capacity", p.pit_capacity, false);
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    c.fail(loc, e.what());
  }
}

std::optional<MobilitySpec> read_mobility(Checker& c, const json* j, NodeRole role, const std::string& loc,
                                          const BoundsBox& bounds)
{
  if (j == nullptr) {
    if (role == NodeRole::Gcs) {
      c.fail(loc, "missing required field (ground stations need at least a static position)");
    } else {
      c.fail(loc, "missing required field");
    }
    return std::nullopt;
  }
  if (!c.object(*j, loc)) return std::nullopt;
  const std::string model = c.string(*j, "model", loc).value_or(role == NodeRole::Gcs ? "static" : "");
  if (model == "static") {
    c.only(*j, {"model", "position"}, loc);
    auto p = c.position(*j, "position", loc, true);
    if (!p) return std::nullopt;
    if (p->z < 0.0) {
      c.fail(Checker::at(loc, "position"), "altitude must be >= 0");
      return std::nullopt;
    }
    return StaticSpec{*p};
  }
  if (model == "random_waypoint") {
    c.only(*j, {"model", "start", "speed_min", "speed_max", "pause_ms"}, loc);
    auto start = c.position(*j, "start", loc, true);
    auto vmin = c.number(*j, "speed_min", loc, true);
    auto vmax = c.number(*j, "speed_max", loc, true);
    auto pause = c.millis(*j, "pause_ms", loc);
    if (!start || !vmin || !vmax) return std::nullopt;
    RandomWaypointSpec spec{*start, *vmin, *vmax, SimTime::millis(pause.value_or(0))};
    bool ok = true;
    if (!(spec.speed_min > 0.0)) {
      c.fail(Checker::at(loc, "speed_min"), "must be positive");
      ok = false;
    }
    if (spec.speed_min > spec.speed_max) {
      c.fail(loc, "speed_min exceeds speed_max (v_min > v_max)");
      ok = false;
    }
    if (!bounds.contains(spec.start)) {
      c.fail(Checker::at(loc, "start"), "start position lies outside the scenario bounds");
      ok = false;
    }
    if (bounds.min == bounds.max && spec.pause == SimTime{}) {
      c.fail(loc, "point-sized bounds need a positive pause_ms");
      ok = false;
    }
    return ok ? std::optional<MobilitySpec>(spec) : std::nullopt;
  }
  if (model == "circular_orbit") {
    c.only(*j, {"model", "center", "radius", "angular_speed", "phase"}, loc);
    auto center = c.position(*j, "center", loc, true);
    auto radius = c.number(*j, "radius", loc, true);
    auto omega = c.number(*j, "angular_speed", loc, true);
    auto phase = c.number(*j, "phase", loc);
    if (!center || !radius || !omega) return std::nullopt;
    bool ok = true;
    if (*radius < 0.0) {
      c.fail(Checker::at(loc, "radius"), "must be >= 0");
      ok = false;
    }
    if (center->z < 0.0) {
      c.fail(Checker::at(loc, "center"), "altitude must be >= 0");
      ok = false;
    }
    return ok ? std::optional<MobilitySpec>(OrbitSpec{*center, *radius, *omega, phase.value_or(0.0)}) : std::nullopt;
  }
  c.fail(Checker::at(loc, "model"), "unknown mobility model '" + model +
                                         "' (expected static, random_waypoint or circular_orbit)");
  return std::nullopt;
}

std::optional<AppSpec> read_app(Checker& c, const json& j, const std::string& loc)
{
  if (!c.object(j, loc)) return std::nullopt;
  const auto type = c.string(j, "type", loc, true);
  if (!type) return std::nullopt;
  auto positive_period = [&](std::optional<std::int64_t> v) -> std::optional<SimTime> {
    if (!v) return std::nullopt;
    if (*v <= 0) {
      c.fail(Checker::at(loc, "period_ms"), "must be positive");
      return std::nullopt;
    }
    return SimTime::millis(*v);
  };
  if (*type == "publisher") {
    c.only(j, {"type", "key", "period_ms", "payload_bytes", "start_ms"}, loc);
    auto key = c.key_expr(j, "key", loc);
    auto period = positive_period(c.millis(j, "period_ms", loc, true));
    auto payload = c.integer(j, "payload_bytes", loc, true);
    auto start = c.millis(j, "start_ms", loc);
    bool ok = key && period && payload;
    if (key && !key->is_concrete()) {
      c.fail(Checker::at(loc, "key"), "publisher key must be concrete");
      ok = false;
    }
    if (payload && *payload < 0) {
      c.fail(Checker::at(loc, "payload_bytes"), "must be >= 0");
      ok = false;
    }
    if (!ok) return std::nullopt;
    return PublisherApp{*key, *period, *payload, SimTime::millis(start.value_or(0))};
  }
  if (*type == "subscriber") {
    c.only(j, {"type", "expr"}, loc);
    auto expr = c.key_expr(j, "expr", loc);
    if (!expr) return std::nullopt;
    return SubscriberApp{*expr};
  }
  if (*type == "querier") {
    c.only(j, {"type", "expr", "period_ms", "start_ms"}, loc);
    auto expr = c.key_expr(j, "expr", loc);
    auto period = positive_period(c.millis(j, "period_ms", loc, true));
    auto start = c.millis(j, "start_ms", loc);
    if (!expr || !period) return std::nullopt;
    return QuerierApp{*expr, *period, SimTime::millis(start.value_or(0))};
  }
  c.fail(Checker::at(loc, "type"), "unknown app type '" + *type + "' (expected publisher, subscriber or querier)");
  return std::nullopt;
}

std::string line_column(std::string_view text, std::size_t byte)
{
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json position_json(const Position& p)
{
  return json::array({p.x, p.y, p.z});
}

std::int64_t to_ms(SimTime t) { return t.us() / 1000; }

}  // namespace

ScenarioError::ScenarioError(std::vector<ValidationError> errors)
    : std::runtime_error(join(errors)), errors_(std::move(errors))
{
}

Scenario parse_scenario(std::string_view text)
{
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioError({{line_column(text, e.byte == 0 ? 0 : e.byte - 1), std::string("JSON parse error: ") + e.what()}});
  }

  Checker c;
  Scenario s;
  if (!c.object(doc, "(root)")) throw ScenarioError(std::move(c.errors));
  c.only(doc, {"format", "duration_ms", "seed", "bounds", "channel", "protocol", "output", "nodes"}, "");

  if (auto fmt = c.integer(doc, "format", "", true); fmt && *fmt != kScenarioFormat) {
    c.fail("format", "unsupported format " + std::to_string(*fmt) + " (expected 1)");
  }
  if (auto d = c.millis(doc, "duration_ms", "", true)) {
    if (*d <= 0)
      c.fail("duration_ms", "duration must be positive");
    else
      s.duration = SimTime::millis(*d);
  }
  if (const json* seed = c.field(doc, "seed", "", false)) {
    if (seed->is_number_unsigned())
      s.seed = seed->get<std::uint64_t>();
    else
      c.fail("seed", "expected an unsigned 64-bit integer");
  }
  if (const json* b = c.field(doc, "bounds", "", false); b != nullptr && c.object(*b, "bounds")) {
    c.only(*b, {"min", "max"}, "bounds");
    auto lo = c.position(*b, "min", "bounds", true);
    auto hi = c.position(*b, "max", "bounds", true);
    if (lo && hi) {
      BoundsBox box{*lo, *hi};
      if (box.empty())
        c.fail("bounds", "bounds box is empty (min exceeds max)");
      else if (box.min.z < 0.0)
        c.fail("bounds", "bounds must not extend below altitude 0");
      else
        s.bounds = box;
    }
  }
  if (const json* ch = c.field(doc, "channel", "", false)) read_channel(c, *ch, s.channel);
  if (const json* pr = c.field(doc, "protocol", "", false)) read_protocol(c, *pr, s.protocol);
  if (const json* out = c.field(doc, "output", "", false); out != nullptr && c.object(*out, "output")) {
    c.only(*out, {"position_sample_ms"}, "output");
    if (auto v = c.millis(*out, "position_sample_ms", "output")) {
      if (*v <= 0)
        c.fail("output.position_sample_ms", "must be positive");
      else
        s.position_sample_interval = SimTime::millis(*v);
    }
  }

  const json* nodes = c.field(doc, "nodes", "", true);
  if (nodes != nullptr && !nodes->is_array()) {
    c.fail("nodes", "expected an array");
  } else if (nodes != nullptr) {
    if (nodes->empty()) c.fail("nodes", "scenario needs at least one node");
    std::map<std::string, std::size_t> first_seen;
    for (std::size_t i = 0; i < nodes->size(); ++i) {
      const std::string loc = "nodes[" + std::to_string(i) + "]";
      const json& jn = (*nodes)[i];
      if (!c.object(jn, loc)) continue;
      c.only(jn, {"id", "role", "mobility", "apps"}, loc);
      NodeSpec n;
      bool ok = true;
      if (auto id = c.string(jn, "id", loc, true)) {
        n.id = *id;
        if (!valid_node_id(n.id)) {
          c.fail(loc + ".id", "node id '" + n.id + "' must be non-empty and use only [A-Za-z0-9_.-]");
          ok = false;
        } else if (auto [it, fresh] = first_seen.emplace(n.id, i); !fresh) {
          c.fail(loc + ".id", "duplicate node id '" + n.id + "' at nodes[" + std::to_string(it->second) + "] and nodes[" +
                                  std::to_string(i) + "]");
          ok = false;
        }
      } else {
        ok = false;
      }
      const std::string role = c.string(jn, "role", loc).value_or("uav");
      if (role == "uav") {
        n.role = NodeRole::Uav;
      } else if (role == "gcs") {
        n.role = NodeRole::Gcs;
      } else {
        c.fail(loc + ".role", "unknown role '" + role + "' (expected uav or gcs)");
        ok = false;
      }
      if (auto m = read_mobility(c, c.field(jn, "mobility", loc, false), n.role, loc + ".mobility", s.bounds)) {
        n.mobility = *m;
      } else {
        ok = false;
      }
      if (const json* apps = c.field(jn, "apps", loc, false)) {
        if (!apps->is_array()) {
          c.fail(loc + ".apps", "expected an array");
          ok = false;
        } else {
          for (std::size_t k = 0; k < apps->size(); ++k) {
            auto app = read_app(c, (*apps)[k], loc + ".apps[" + std::to_string(k) + "]");
            if (app)
              n.apps.push_back(*app);
            else
              ok = false;
          }
        }
      }
      if (ok) s.nodes.push_back(std::move(n));
    }
  }

  if (!c.errors.empty()) throw ScenarioError(std::move(c.errors));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open scenario");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(path, "read failed");
  return parse_scenario(buf.str());
}

json to_json(const Scenario& s)
{
  json doc;
  doc["format"] = kScenarioFormat;
  doc["duration_ms"] = to_ms(s.duration);
  doc["seed"] = s.seed;
  doc["bounds"] = json{{"min", position_json(s.bounds.min)}, {"max", position_json(s.bounds.max)}};
  const auto& ch = s.channel;
  doc["channel"] = json{{"carrier_freq_hz", ch.carrier_freq},
                        {"ref_dist_m", ch.ref_dist},
                        {"pathloss_exponent", ch.pathloss_exponent},
                        {"tx_power_dbm", ch.tx_power},
                        {"noise_floor_dbm", ch.noise_floor},
                        {"snr_threshold_db", ch.snr_threshold},
                        {"bitrate_bps", ch.bitrate},
                        {"extra_loss_prob", ch.extra_loss_prob},
                        {"propagation_speed_mps", ch.propagation_speed}};
  const auto& pr = s.protocol;
  doc["protocol"] = json{{"hop_limit", pr.hop_limit},
                         {"beacon_interval_ms", to_ms(pr.beacon_interval)},
                         {"pit_lifetime_ms", to_ms(pr.pit_lifetime)},
                         {"cs_capacity", pr.cs_capacity},
                         {"seen_set_capacity", pr.seen_set_capacity},
                         {"pit_capacity", pr.pit_capacity}};
  if (s.position_sample_interval) doc["output"] = json{{"position_sample_ms", to_ms(*s.position_sample_interval)}};

  json nodes = json::array();
  for (const auto& n : s.nodes) {
    json jn;
    jn["id"] = n.id;
    jn["role"] = n.role == NodeRole::Gcs ? "gcs" : "uav";
    jn["mobility"] = std::visit(
        [](const auto& m) -> json {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, StaticSpec>) {
            return json{{"model", "static"}, {"position", position_json(m.position)}};
          } else if constexpr (std::is_same_v<T, RandomWaypointSpec>) {
            return json{{"model", "random_waypoint"},
                        {"start", position_json(m.start)},
                        {"speed_min", m.speed_min},
                        {"speed_max", m.speed_max},
                        {"pause_ms", to_ms(m.pause)}};
          } else {
            return json{{"model", "circular_orbit"},
                        {"center", position_json(m.center)},
                        {"radius", m.radius},
                        {"angular_speed", m.angular_speed},
                        {"phase", m.phase}};
          }
        },
        n.mobility);
    json apps = json::array();
    for (const auto& app : n.apps) {
      apps.push_back(std::visit(
          [](const auto& a) -> json {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, PublisherApp>) {
              return json{{"type", "publisher"},
                          {"key", a.key.str()},
                          {"period_ms", to_ms(a.period)},
                          {"payload_bytes", a.payload_bytes},
                          {"start_ms", to_ms(a.start)}};
            } else if constexpr (std::is_same_v<T, SubscriberApp>) {
              return json{{"type", "subscriber"}, {"expr", a.expr.str()}};
            } else {
              return json{{"type", "querier"},
                          {"expr", a.expr.str()},
                          {"period_ms", to_ms(a.period)},
                          {"start_ms", to_ms(a.start)}};
            }
          },
          app));
    }
    jn["apps"] = std::move(apps);
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  return doc;
}

std::string serialize_scenario(const Scenario& scenario)
{
  return to_json(scenario).dump(2) + "\n";
}

std::string scenario_digest(const Scenario& scenario)
{
  const std::string canonical = to_json(scenario).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 0xf];
  }
  return "sha256:" + hex;
}

std::int64_t scheduled_count(SimTime start, SimTime period, SimTime duration)
{
  if (period <= SimTime{}) throw std::invalid_argument("period must be positive");
  if (start > duration) return 0;
  return (duration - start).us() / period.us() + 1;
}

}  // namespace fanetsim

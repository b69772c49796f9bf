#include "fanetsim/trace.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "fanetsim/errors.hpp"

namespace fanetsim {

using json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 8> kEventNames = {"Send",     "Recv",    "DupDrop", "RangeDrop",
                                                         "LossDrop", "Deliver", "Expire",  "Invalid"};

const std::string& name_of(NodeId id, const std::vector<std::string>& names)
{
  if (id.value >= names.size()) throw TraceFormatError("node index out of range");
  return names[id.value];
}

NodeId node_by_name(std::string_view name, const std::vector<std::string>& names)
{
  for (std::uint32_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return NodeId{i};
  }
  throw TraceFormatError("unknown node '" + std::string(name) + "'");
}

MsgId parse_msg_id(std::string_view text, const std::vector<std::string>& names)
{
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) throw TraceFormatError("malformed message id '" + std::string(text) + "'");
  MsgId id;
  id.origin = node_by_name(text.substr(0, colon), names);
  const auto digits = text.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id.seq);
  if (ec != std::errc{} || ptr != digits.data() + digits.size())
    throw TraceFormatError("malformed message sequence in '" + std::string(text) + "'");
  return id;
}

json bindings_json(const std::vector<AppBinding>& bindings, const std::vector<std::string>& names)
{
  json arr = json::array();
  for (const auto& b : bindings) arr.push_back(json{{"node", name_of(b.node, names)}, {"expr", b.expr}});
  return arr;
}

std::vector<AppBinding> bindings_from(const json& arr, const std::vector<std::string>& names)
{
  std::vector<AppBinding> out;
  for (const auto& b : arr) {
    out.push_back(AppBinding{node_by_name(b.at("node").get<std::string>(), names), b.at("expr").get<std::string>()});
  }
  return out;
}

TraceHeader parse_header(const json& j)
{
  if (j.value("type", "") != "header") throw TraceFormatError("first line is not a trace header");
  TraceHeader h;
  h.tool = j.at("tool").get<std::string>();
  h.version = j.at("version").get<std::string>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.scenario_digest = j.at("scenario_digest").get<std::string>();
  h.duration = SimTime::micros(j.at("duration_us").get<std::int64_t>());
  h.hop_limit = j.at("hop_limit").get<int>();
  h.beacon_interval = SimTime::micros(j.at("beacon_interval_us").get<std::int64_t>());
  h.nodes = j.at("nodes").get<std::vector<std::string>>();
  h.subscriptions = bindings_from(j.at("subscriptions"), h.nodes);
  h.queries = bindings_from(j.at("queries"), h.nodes);
  return h;
}

TraceRecord parse_record(const json& j, const std::vector<std::string>& names)
{
  TraceRecord r;
  r.t = SimTime::micros(j.at("t").get<std::int64_t>());
  r.node = node_by_name(j.at("node").get<std::string>(), names);
  const auto event = parse_trace_event(j.at("event").get<std::string>());
  if (!event) throw TraceFormatError("unknown event '" + j.at("event").get<std::string>() + "'");
  r.event = *event;
  r.msg = parse_msg_id(j.at("msg").get<std::string>(), names);
  const auto kind = parse_message_kind(j.at("kind").get<std::string>());
  if (!kind) throw TraceFormatError("unknown message kind '" + j.at("kind").get<std::string>() + "'");
  r.kind = *kind;
  r.key = j.at("key").get<std::string>();
  r.expr = j.at("expr").get<std::string>();
  if (const auto ref = j.at("ref").get<std::string>(); !ref.empty()) r.ref = parse_msg_id(ref, names);
  if (const auto to = j.at("to").get<std::string>(); !to.empty()) r.to = node_by_name(to, names);
  r.payload_bytes = j.at("payload").get<std::int64_t>();
  r.hops_taken = j.at("hops").get<int>();
  r.origin_time = SimTime::micros(j.at("origin_t").get<std::int64_t>());
  return r;
}

}  // namespace

std::string_view to_string(TraceEvent event)
{
  return kEventNames[static_cast<std::size_t>(event)];
}

std::optional<TraceEvent> parse_trace_event(std::string_view text)
{
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (kEventNames[i] == text) return static_cast<TraceEvent>(i);
  }
  return std::nullopt;
}

std::string format_msg_id(const MsgId& id, const std::vector<std::string>& names)
{
  return name_of(id.origin, names) + ":" + std::to_string(id.seq);
}

std::string format_header(const TraceHeader& h)
{
  json j;
  j["type"] = "header";
  j["tool"] = h.tool;
  j["version"] = h.version;
  j["seed"] = h.seed;
  j["scenario_digest"] = h.scenario_digest;
  j["duration_us"] = h.duration.us();
  j["hop_limit"] = h.hop_limit;
  j["beacon_interval_us"] = h.beacon_interval.us();
  j["nodes"] = h.nodes;
  j["subscriptions"] = bindings_json(h.subscriptions, h.nodes);
  j["queries"] = bindings_json(h.queries, h.nodes);
  return j.dump();
}

std::string format_record(const TraceRecord& r, const std::vector<std::string>& names)
{
  json j;
  j["t"] = r.t.us();
  j["node"] = name_of(r.node, names);
  j["event"] = to_string(r.event);
  j["msg"] = format_msg_id(r.msg, names);
  j["kind"] = to_string(r.kind);
  j["key"] = r.key;
  j["expr"] = r.expr;
  j["ref"] = r.ref ? format_msg_id(*r.ref, names) : std::string{};
  j["to"] = r.to ? name_of(*r.to, names) : std::string{};
  j["payload"] = r.payload_bytes;
  j["hops"] = r.hops_taken;
  j["origin_t"] = r.origin_time.us();
  return j.dump();
}

void JsonlTraceWriter::write_header(const TraceHeader& header)
{
  names_ = header.nodes;
  out_ << format_header(header) << '\n';
}

void JsonlTraceWriter::write(const TraceRecord& record)
{
  out_ << format_record(record, names_) << '\n';
}

void TeeSink::write_header(const TraceHeader& header)
{
  for (auto* s : sinks_) s->write_header(header);
}

void TeeSink::write(const TraceRecord& record)
{
  for (auto* s : sinks_) s->write(record);
}

Trace read_trace(std::istream& in)
{
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (!have_header) {
        trace.header = parse_header(j);
        have_header = true;
      } else {
        trace.records.push_back(parse_record(j, trace.header.nodes));
      }
    } catch (const json::exception& e) {
      throw TraceFormatError("trace line " + std::to_string(line_no) + ": " + e.what());
    } catch (const TraceFormatError& e) {
      throw TraceFormatError("trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw TraceFormatError("trace is empty");
  return trace;
}

Trace read_trace_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open trace");
  return read_trace(in);
}

}  // namespace fanetsim

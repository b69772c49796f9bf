#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fanetsim/message.hpp"
#include "fanetsim/sim_time.hpp"

namespace fanetsim {

enum class TraceEvent { Send, Recv, DupDrop, RangeDrop, LossDrop, Deliver, Expire, Invalid };

std::string_view to_string(TraceEvent event);
std::optional<TraceEvent> parse_trace_event(std::string_view text);

/**
 * One line of the JSONL trace.
 *
 * Serialized field order: t, node, event, msg, kind, key, expr, ref, to,
 * payload, hops, origin_t. Times are integer microseconds; node and message
 * ids are written with node names (`<origin>:<seq>` for messages). `expr` is
 * the matching subscription (or query expression) on Deliver records, `ref`
 * the query id carried by a Reply, `to` the unicast destination of a Send.
 * Empty strings mark absent optional fields.
 */
struct TraceRecord {
  SimTime t;
  NodeId node;
  TraceEvent event = TraceEvent::Send;
  MsgId msg;
  MessageKind kind = MessageKind::Publish;
  std::string key;
  std::string expr;
  std::optional<MsgId> ref;
  std::optional<NodeId> to;
  std::int64_t payload_bytes = 0;
  int hops_taken = 0;
  SimTime origin_time;

  bool operator==(const TraceRecord&) const = default;
};

struct AppBinding {
  NodeId node;
  std::string expr;

  bool operator==(const AppBinding&) const = default;
};

/// First line of every trace.
struct TraceHeader {
  std::string tool = "fanetsim";
  std::string version;
  std::uint64_t seed = 0;
  std::string scenario_digest;
  SimTime duration;
  int hop_limit = 0;
  SimTime beacon_interval;
  std::vector<std::string> nodes;
  std::vector<AppBinding> subscriptions;
  std::vector<AppBinding> queries;

  bool operator==(const TraceHeader&) const = default;
};

struct Trace {
  TraceHeader header;
  std::vector<TraceRecord> records;
};

class TraceFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class TraceSink {
public:
  virtual ~TraceSink() = default;
  virtual void write_header(const TraceHeader& header) = 0;
  virtual void write(const TraceRecord& record) = 0;
};

/// Streams records as they are produced.
class JsonlTraceWriter : public TraceSink {
public:
  explicit JsonlTraceWriter(std::ostream& out) : out_(out) {}
  void write_header(const TraceHeader& header) override;
  void write(const TraceRecord& record) override;

private:
  std::ostream& out_;
  std::vector<std::string> names_;
};

class MemoryTrace : public TraceSink {
public:
  void write_header(const TraceHeader& header) override { trace_.header = header; }
  void write(const TraceRecord& record) override { trace_.records.push_back(record); }
  const Trace& trace() const { return trace_; }

private:
  Trace trace_;
};

/// Fans out to several sinks.
class TeeSink : public TraceSink {
public:
  explicit TeeSink(std::vector<TraceSink*> sinks) : sinks_(std::move(sinks)) {}
  void write_header(const TraceHeader& header) override;
  void write(const TraceRecord& record) override;

private:
  std::vector<TraceSink*> sinks_;
};

std::string format_header(const TraceHeader& header);
std::string format_record(const TraceRecord& record, const std::vector<std::string>& names);

/// Throws TraceFormatError naming the offending line.
Trace read_trace(std::istream& in);
Trace read_trace_file(const std::filesystem::path& path);

std::string format_msg_id(const MsgId& id, const std::vector<std::string>& names);

}  // namespace fanetsim

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fanetsim/mobility.hpp"
#include "fanetsim/router.hpp"
#include "fanetsim/scenario.hpp"
#include "fanetsim/scheduler.hpp"
#include "fanetsim/trace.hpp"

namespace fanetsim {

TraceHeader make_trace_header(const Scenario& scenario, std::uint64_t seed);

/**
 * One run of a scenario.
 *
 * Owns the clock, the node trajectories and routers, and the channel streams.
 * Every send, reception, drop, delivery and expiry becomes a trace record;
 * protocol anomalies never abort the run.
 */
class Simulation {
public:
  /// `positions`, when given, receives one JSON line per node per sample
  /// interval (if the scenario enables sampling).
  Simulation(const Scenario& scenario, std::uint64_t seed, TraceSink& sink, std::ostream* positions = nullptr);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Schedules all application and beacon activity and runs to the scenario
  /// duration. Call once.
  void run();

  Scheduler& scheduler();
  const Router& router(NodeId node) const;
  NodeId node_id(std::string_view name) const;
  std::size_t node_count() const;
  Position position(NodeId node, SimTime t);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct RunArtifacts {
  std::filesystem::path trace;
  std::filesystem::path summary;
  std::optional<std::filesystem::path> positions;
  std::string summary_text;
};

/// Runs `scenario` with `seed`, writing trace.jsonl and summary.json (and
/// positions.jsonl when sampling is enabled) under `out_dir`. The summary is
/// computed from the trace file as written. Throws IoError on file failures.
RunArtifacts run_scenario(const Scenario& scenario, std::uint64_t seed, const std::filesystem::path& out_dir);

/// In-memory run, mainly for tests.
Trace run_to_memory(const Scenario& scenario, std::uint64_t seed);

}  // namespace fanetsim

// fanetsim command line: run / validate / metrics.
//
// Exit codes: 0 success, 1 validation or usage error, 2 I/O error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "fanetsim/errors.hpp"
#include "fanetsim/metrics.hpp"
#include "fanetsim/scenario.hpp"
#include "fanetsim/simulation.hpp"
#include "fanetsim/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

void setup_logging()
{
  auto logger = spdlog::stderr_color_mt("fanetsim");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("FANETSIM_LOG");
  const std::string level = env == nullptr ? "off" : env;
  if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else {
    if (level != "off") std::cerr << "warning: FANETSIM_LOG='" << level << "' not one of off|info|debug\n";
    spdlog::set_level(spdlog::level::off);
  }
}

void print_errors(const fanetsim::ScenarioError& e)
{
  std::cerr << "scenario is invalid (" << e.errors().size() << " error" << (e.errors().size() == 1 ? "" : "s") << "):\n";
  for (const auto& err : e.errors()) std::cerr << "  " << err.location << ": " << err.message << '\n';
}

std::optional<fanetsim::metrics::FlowKey> parse_flow(const std::string& text, const fanetsim::Trace& trace)
{
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? std::string::npos : text.find(':', a + 1);
  if (b == std::string::npos) return std::nullopt;
  const auto& names = trace.header.nodes;
  auto lookup = [&](const std::string& name) -> std::optional<fanetsim::NodeId> {
    for (std::uint32_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return fanetsim::NodeId{i};
    }
    return std::nullopt;
  };
  const auto origin = lookup(text.substr(0, a));
  const auto sub = lookup(text.substr(a + 1, b - a - 1));
  if (!origin || !sub) return std::nullopt;
  try {
    return fanetsim::metrics::FlowKey{*origin, *sub, fanetsim::KeyExpr::parse(text.substr(b + 1)).str()};
  } catch (const fanetsim::KeyExprError&) {
    return std::nullopt;
  }
}

std::optional<fanetsim::metrics::Window> parse_window(const std::string& text)
{
  const auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  try {
    std::size_t used = 0;
    const long long t0 = std::stoll(text.substr(0, colon), &used);
    if (used != colon) return std::nullopt;
    const std::string rest = text.substr(colon + 1);
    const long long t1 = std::stoll(rest, &used);
    if (used != rest.size() || t0 < 0 || t1 <= t0) return std::nullopt;
    return fanetsim::metrics::Window{fanetsim::SimTime::millis(t0), fanetsim::SimTime::millis(t1)};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv)
{
  setup_logging();

  CLI::App app{"fanetsim - discrete-event FANET simulator with named-data pub/sub routing"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  auto* run = app.add_subcommand("run", "Run a scenario and write trace.jsonl and summary.json");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Check a scenario file and report every problem");
  validate->add_option("--scenario", scenario_path, "Scenario JSON file")->required();

  std::string trace_path;
  std::string flow_text;
  std::string window_text;
  auto* metrics = app.add_subcommand("metrics", "Recompute the summary from a stored trace");
  metrics->add_option("--trace", trace_path, "Trace JSONL file")->required();
  metrics->add_option("--flow", flow_text, "Restrict flows to origin:subscriber:expr");
  metrics->add_option("--window", window_text, "Throughput window t0:t1 in milliseconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }

  try {
    if (*run) {
      fanetsim::Scenario scenario = fanetsim::load_scenario(scenario_path);
      const std::uint64_t effective = seed.value_or(scenario.seed);
      const auto art = fanetsim::run_scenario(scenario, effective, out_dir);
      std::cout << "trace:   " << art.trace.string() << '\n' << "summary: " << art.summary.string() << '\n';
      if (art.positions) std::cout << "positions: " << art.positions->string() << '\n';
      return kExitOk;
    }
    if (*validate) {
      const fanetsim::Scenario scenario = fanetsim::load_scenario(scenario_path);
      std::cout << scenario_path << ": ok (" << scenario.nodes.size() << " nodes, "
                << fanetsim::scenario_digest(scenario) << ")\n";
      return kExitOk;
    }
    if (*metrics) {
      const fanetsim::Trace trace = fanetsim::read_trace_file(trace_path);
      std::optional<fanetsim::metrics::FlowKey> flow;
      std::optional<fanetsim::metrics::Window> window;
      if (!flow_text.empty()) {
        flow = parse_flow(flow_text, trace);
        if (!flow) {
          std::cerr << "invalid --flow '" << flow_text << "' (expected origin:subscriber:expr with known nodes)\n";
          return kExitInvalid;
        }
      }
      if (!window_text.empty()) {
        window = parse_window(window_text);
        if (!window) {
          std::cerr << "invalid --window '" << window_text << "' (expected t0:t1 in ms with t1 > t0 >= 0)\n";
          return kExitInvalid;
        }
      }
      std::cout << fanetsim::metrics::render_summary(fanetsim::metrics::summarize(trace, window, flow));
      return kExitOk;
    }
  } catch (const fanetsim::ScenarioError& e) {
    print_errors(e);
    return kExitInvalid;
  } catch (const fanetsim::TraceFormatError& e) {
    std::cerr << "invalid trace: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const fanetsim::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

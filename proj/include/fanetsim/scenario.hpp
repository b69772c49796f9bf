#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fanetsim/channel.hpp"
#include "fanetsim/key_expr.hpp"
#include "fanetsim/mobility.hpp"
#include "fanetsim/router.hpp"

namespace fanetsim {

inline constexpr int kScenarioFormat = 1;

enum class NodeRole { Uav, Gcs };

struct StaticSpec {
  Position position;
  bool operator==(const StaticSpec&) const = default;
};

/// Waypoints are drawn inside the scenario bounds.
struct RandomWaypointSpec {
  Position start;
  double speed_min = 1.0;
  double speed_max = 1.0;
  SimTime pause;
  bool operator==(const RandomWaypointSpec&) const = default;
};

struct OrbitSpec {
  Position center;
  double radius = 0.0;
  double angular_speed = 0.0;
  double phase = 0.0;
  bool operator==(const OrbitSpec&) const = default;
};

using MobilitySpec = std::variant<StaticSpec, RandomWaypointSpec, OrbitSpec>;

struct PublisherApp {
  KeyExpr key;
  SimTime period;
  std::int64_t payload_bytes = 0;
  SimTime start;
  bool operator==(const PublisherApp&) const = default;
};

struct SubscriberApp {
  KeyExpr expr;
  bool operator==(const SubscriberApp&) const = default;
};

struct QuerierApp {
  KeyExpr expr;
  SimTime period;
  SimTime start;
  bool operator==(const QuerierApp&) const = default;
};

using AppSpec = std::variant<PublisherApp, SubscriberApp, QuerierApp>;

struct NodeSpec {
  std::string id;
  NodeRole role = NodeRole::Uav;
  MobilitySpec mobility;
  std::vector<AppSpec> apps;
  bool operator==(const NodeSpec&) const = default;
};

struct Scenario {
  SimTime duration;
  std::uint64_t seed = 0;
  BoundsBox bounds{{0.0, 0.0, 0.0}, {1000.0, 1000.0, 300.0}};
  channel::ChannelParams channel;
  ProtocolParams protocol;
  std::optional<SimTime> position_sample_interval;
  std::vector<NodeSpec> nodes;

  bool operator==(const Scenario&) const = default;
};

struct ValidationError {
  std::string location;  // JSON path such as "nodes[2].apps[0].key", or "line 4, column 7"
  std::string message;
};

/// Carries every problem found in a scenario, not just the first.
class ScenarioError : public std::runtime_error {
public:
  explicit ScenarioError(std::vector<ValidationError> errors);
  const std::vector<ValidationError>& errors() const { return errors_; }

private:
  std::vector<ValidationError> errors_;
};

/// Parses and validates scenario JSON text; throws ScenarioError.
Scenario parse_scenario(std::string_view text);
/// Throws IoError if the file cannot be read, ScenarioError if it is invalid.
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical document with every field explicit; parse_scenario(to_json(s).dump()) == s.
nlohmann::ordered_json to_json(const Scenario& scenario);
std::string serialize_scenario(const Scenario& scenario);
/// Hex SHA-256 of the canonical serialization.
std::string scenario_digest(const Scenario& scenario);

/// Messages a publisher emits within [0, duration]: floor((D - s) / p) + 1, or 0 if s > D.
std::int64_t scheduled_count(SimTime start, SimTime period, SimTime duration);

}  // namespace fanetsim

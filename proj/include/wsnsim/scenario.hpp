#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wsnsim/energy.hpp"
#include "wsnsim/mac.hpp"
#include "wsnsim/radio.hpp"
#include "wsnsim/routing.hpp"

namespace wsnsim {

enum class DiscoveryMode : std::uint8_t { kAomdv, kDsr, kHello, kDisco };
const char* to_string(DiscoveryMode m);
std::optional<DiscoveryMode> parse_discovery_mode(std::string_view s);

/// Constant-bit-rate flow. Packets are generated at start, start + 1/rate, ...
/// strictly before `stop` (the run end when unset).
struct FlowSpec {
  NodeId origin = 0;
  NodeId destination = 0;
  SimTime start = SimTime::seconds(1);
  double rate = 1.0;  // packets per second
  std::uint32_t payload_bits = 512;
  std::optional<SimTime> stop;

  SimTime interval() const;
  bool operator==(const FlowSpec&) const = default;
};

struct FailureSpec {
  NodeId node = 0;
  SimTime at;
  bool operator==(const FailureSpec&) const = default;
};

struct StaticRouteSpec {
  NodeId node = 0;
  NodeId destination = 0;
  NodeId next_hop = 0;
  std::uint32_t hops = 1;
  bool operator==(const StaticRouteSpec&) const = default;
};

struct Placement {
  double x = 0.0;
  double y = 0.0;
  bool mobile = false;
  bool operator==(const Placement&) const = default;
};

struct ScenarioConfig {
  Arena arena;
  double range = 100.0;
  std::size_t nodes = 20;
  std::map<NodeId, Placement> placements;  // empty: uniform random placement
  double mobile_fraction = 0.0;            // used with random placement only
  MobilityParams mobility;
  SimTime mobility_step = SimTime::seconds(1);

  MacParams mac;
  DiscoveryMode mode = DiscoveryMode::kAomdv;
  double hello_talk_prob = 0.3;
  SimTime hello_slot = SimTime::millis(10);
  SimTime disco_slot = SimTime::millis(10);

  RoutingParams routing;
  PowerProfile power;

  std::vector<FlowSpec> flows;
  std::vector<FailureSpec> failures;
  std::vector<StaticRouteSpec> static_routes;

  SimTime run = SimTime::seconds(60);
  std::uint64_t seed = 1;
};

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

/// Malformed line; carries the 1-based line number.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Well-formed but invalid setting; carries the offending field name.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

ScenarioConfig parse_scenario(std::string_view text);
std::string emit_scenario(const ScenarioConfig& cfg);
/// Throws ConfigError on the first violated constraint.
void validate_scenario(const ScenarioConfig& cfg);

}  // namespace wsnsim

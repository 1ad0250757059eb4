#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsnsim/metrics.hpp"
#include "wsnsim/scenario.hpp"

namespace wsnsim {

struct RunOptions {
  bool check = false;  // run invariant checkers after every mutation
  bool trace = false;  // collect the line-per-event trace
};

/// A checked invariant failed; `event_index` is the number of events
/// dispatched when it was detected.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(const std::string& what, std::uint64_t event_index)
      : std::runtime_error("event " + std::to_string(event_index) + ": " + what), event_index_(event_index) {}
  std::uint64_t event_index() const { return event_index_; }

 private:
  std::uint64_t event_index_;
};

struct RunOutput {
  MetricsReport report;
  RunTrace trace;
};

/// Initial poses: explicit coordinates when given, otherwise uniform in the
/// arena from stream "placement" with round(fraction * n) mobile nodes.
/// Waypoints are not assigned here.
std::vector<NodePose> place_nodes(const ScenarioConfig& cfg);

/// Wires every module for one run and simulates [0, cfg.run].
RunOutput run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

/// Segments with every instant at or after `death` turned into SLEEP.
std::vector<StateSegment> clip_after_death(const std::vector<StateSegment>& segments, SimTime death);

}  // namespace wsnsim

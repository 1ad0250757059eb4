#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wsnsim/sim_core.hpp"
#include "wsnsim/time.hpp"

namespace wsnsim {

enum class RadioState : std::uint8_t { kTx = 0, kRx = 1, kListen = 2, kSleep = 3 };
inline constexpr std::size_t kRadioStateCount = 4;
const char* to_string(RadioState s);

/// Radio power draw per state, in integer microwatts so that
/// energy = power x time stays exact (uW x us = pJ).
struct PowerProfile {
  std::int64_t tx_uw = 60'000;
  std::int64_t rx_uw = 45'000;
  std::int64_t listen_uw = 45'000;
  std::int64_t sleep_uw = 90;

  std::int64_t power_uw(RadioState s) const;
  /// Throws std::invalid_argument unless sleep < listen and all are >= 0.
  void validate() const;
};

/// Energy in picojoules.
using Picojoules = std::int64_t;

inline double pj_to_joules(Picojoules e) { return static_cast<double>(e) * 1e-12; }

struct NodeEnergy {
  std::array<SimTime, kRadioStateCount> duration{};
  std::array<Picojoules, kRadioStateCount> energy{};
  Picojoules total = 0;

  SimTime awake() const {
    return duration[0] + duration[1] + duration[2];
  }
};

/// Per-node, per-state energy accounting. Intervals for one node must be
/// appended in time order without overlap; anything else is a MAC
/// bookkeeping bug and throws std::logic_error.
class EnergyLedger {
 public:
  EnergyLedger(std::size_t nodes, PowerProfile profile);

  void accrue_state(NodeId node, RadioState state, SimTime start, SimTime end);
  /// Appends `duration` at the node's cursor.
  void accrue_state(NodeId node, RadioState state, SimTime duration);

  /// Checks that every node's durations sum to `run_length` exactly.
  void finalize(SimTime run_length) const;

  const NodeEnergy& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return nodes_.size(); }
  Picojoules network_total() const;
  const PowerProfile& profile() const { return profile_; }

 private:
  PowerProfile profile_;
  std::vector<NodeEnergy> nodes_;
  std::vector<SimTime> cursor_;
};

struct StateSegment {
  SimTime start;
  SimTime end;
  RadioState state = RadioState::kSleep;
};

/// Raw radio activity of one node. The realized state at any instant is the
/// highest-priority active kind: TX > RX > awake (LISTEN) > SLEEP.
class RadioTimeline {
 public:
  void add_awake(SimTime start, SimTime end) { awake_.push_back({start, end}); }
  void add_tx(SimTime start, SimTime end) { tx_.push_back({start, end}); }
  void add_rx(SimTime start, SimTime end) { rx_.push_back({start, end}); }

  /// Partition of [0, run_end) into maximal same-state segments.
  std::vector<StateSegment> segments(SimTime run_end) const;

 private:
  struct Span {
    SimTime start;
    SimTime end;
  };
  std::vector<Span> awake_, tx_, rx_;
};

/// State at `t` from a partition produced by RadioTimeline::segments.
RadioState state_at(const std::vector<StateSegment>& segments, SimTime t);

}  // namespace wsnsim

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wsnsim/packets.hpp"
#include "wsnsim/sim_core.hpp"

namespace wsnsim {

struct Arena {
  double width = 500.0;
  double height = 500.0;
};

struct MobilityParams {
  double v_min = 1.0;
  double v_max = 5.0;
};

struct NodePose {
  NodeId id = 0;
  double x = 0.0;
  double y = 0.0;
  bool mobile = false;
  double waypoint_x = 0.0;
  double waypoint_y = 0.0;
  double speed = 0.0;
};

/// Node positions plus the unit-disk connectivity rule: two live nodes are
/// neighbours iff their Euclidean distance is at most `range`.
class Topology {
 public:
  /// Node ids must be exactly 0..n-1 (poses[i].id == i).
  Topology(Arena arena, double range, std::vector<NodePose> poses);

  std::size_t size() const { return poses_.size(); }
  double range() const { return range_; }
  const Arena& arena() const { return arena_; }
  const std::vector<NodePose>& poses() const { return poses_; }
  const NodePose& pose(NodeId id) const;

  bool alive(NodeId id) const { return alive_.at(static_cast<std::size_t>(id)); }
  void kill(NodeId id);

  /// Sorted ids of live nodes within range, excluding `id`. Throws
  /// std::out_of_range for unknown ids.
  std::vector<NodeId> neighbors(NodeId id) const;
  bool in_range(NodeId a, NodeId b) const;

  /// Random-waypoint step with zero pause time. Arrivals draw a fresh
  /// waypoint and speed from `rng`.
  void step_mobility(double dt, RngStream& rng, const MobilityParams& params);

 private:
  void check(NodeId id) const;

  Arena arena_;
  double range_;
  std::vector<NodePose> poses_;
  std::vector<bool> alive_;
};

/// Draws a fresh waypoint and speed for a mobile node.
void assign_waypoint(NodePose& pose, const Arena& arena, const MobilityParams& params, RngStream& rng);

struct FrameOnAir {
  std::uint64_t tx_id = 0;
  NodeId sender = kNoNode;
  SimTime start;
  SimTime end;
  Frame frame;
  std::vector<NodeId> audible;  // sorted; live nodes in range of the sender at `start`
};

enum class RxOutcome : std::uint8_t { kDelivered, kCollided, kOutOfRange, kRadioAsleep };
const char* to_string(RxOutcome o);

struct ReceiverOutcome {
  NodeId node = kNoNode;
  RxOutcome outcome = RxOutcome::kOutOfRange;
};

using ListenPredicate = std::function<bool(NodeId node, SimTime start, SimTime end)>;

/// Per-receiver fate of `fa` given every frame that may overlap it. The
/// result depends only on the set of frames and the listen predicate, never
/// on their order. Overlap is open-interval intersection. A receiver that is
/// itself transmitting during `fa` is reported as collided (half duplex).
std::vector<ReceiverOutcome> resolve_outcomes(const FrameOnAir& fa, std::span<const FrameOnAir> on_air,
                                              std::size_t node_count, const ListenPredicate& listening);

/// Shared channel: turns scheduled transmissions into start/end events and
/// hands per-receiver outcomes to the MAC.
class Medium {
 public:
  using OutcomeHandler = std::function<void(const FrameOnAir&, const std::vector<ReceiverOutcome>&)>;
  using IntervalHook = std::function<void(NodeId, SimTime, SimTime)>;
  using StartHook = std::function<void(const FrameOnAir&)>;

  Medium(Simulator& sim, Topology& topology) : sim_(sim), topology_(topology) {}

  void set_listen_predicate(ListenPredicate fn) { listening_ = std::move(fn); }
  void set_outcome_handler(OutcomeHandler fn) { on_outcome_ = std::move(fn); }
  void set_tx_hook(IntervalHook fn) { on_tx_ = std::move(fn); }
  void set_rx_hook(IntervalHook fn) { on_rx_ = std::move(fn); }
  void set_start_hook(StartHook fn) { on_start_ = std::move(fn); }
  /// Called instead of transmitting when the sender died before `start`.
  void set_silenced_hook(StartHook fn) { on_silenced_ = std::move(fn); }

  /// Schedules a transmission. A sender that is dead at `start` stays silent.
  void transmit(NodeId sender, SimTime start, SimTime duration, Frame frame);

  std::uint64_t frames_sent() const { return frames_sent_; }

 private:
  void begin(FrameOnAir fa);
  void finish(std::uint64_t tx_id);

  Simulator& sim_;
  Topology& topology_;
  ListenPredicate listening_;
  OutcomeHandler on_outcome_;
  IntervalHook on_tx_;
  IntervalHook on_rx_;
  StartHook on_start_;
  StartHook on_silenced_;
  std::vector<FrameOnAir> on_air_;
  std::uint64_t next_tx_id_ = 0;
  std::uint64_t frames_sent_ = 0;
  SimTime longest_;
};

}  // namespace wsnsim

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_set>
#include <vector>

#include "wsnsim/energy.hpp"
#include "wsnsim/packets.hpp"
#include "wsnsim/radio.hpp"
#include "wsnsim/sim_core.hpp"

namespace wsnsim {

/// HMAC frame layout: one W-SLOT per node (ascending id order) followed by
/// n_islots shared I-SLOTs.
class SlotSchedule {
 public:
  SlotSchedule(std::vector<NodeId> owners, SimTime wslot_len, SimTime islot_len, int n_islots);

  SimTime frame_len() const { return wslot_len_ * n_wslots() + islot_len_ * n_islots_; }
  int n_wslots() const { return static_cast<int>(owners_.size()); }
  int n_islots() const { return n_islots_; }
  SimTime wslot_len() const { return wslot_len_; }
  SimTime islot_len() const { return islot_len_; }
  const std::vector<NodeId>& wslot_owners() const { return owners_; }
  /// Throws std::out_of_range for nodes without a W-SLOT.
  int wslot_of(NodeId node) const;

  SimTime frame_start(std::int64_t frame) const { return frame_len() * frame; }
  SimTime wslot_start(std::int64_t frame, NodeId owner) const {
    return frame_start(frame) + wslot_len_ * wslot_of(owner);
  }
  SimTime islot_start(std::int64_t frame, int islot) const {
    return frame_start(frame) + wslot_len_ * n_wslots() + islot_len_ * islot;
  }
  /// Earliest frame whose W-SLOT for `owner` starts at or after `t`.
  std::int64_t next_wslot_frame(SimTime t, NodeId owner) const;
  /// Earliest frame that starts at or after `t`.
  std::int64_t next_frame(SimTime t) const;

 private:
  std::vector<NodeId> owners_;
  std::map<NodeId, int> slot_of_;
  SimTime wslot_len_;
  SimTime islot_len_;
  int n_islots_;
};

/// Assigns W-SLOT i to the i-th smallest node id. Rejects empty or duplicate
/// id lists, non-positive lengths, n_islots < 1 and wslot_len >= islot_len.
SlotSchedule build_frame_schedule(std::vector<NodeId> node_ids, SimTime wslot_len, SimTime islot_len, int n_islots);

enum class MacMode : std::uint8_t { kHmac, kAlwaysOn };
const char* to_string(MacMode m);

struct MacParams {
  MacMode mode = MacMode::kHmac;
  SimTime wslot_len = SimTime::millis(1);
  SimTime islot_len = SimTime::millis(10);
  int n_islots = 0;  // 0: max(4, nodes / 2)
  std::int64_t bitrate = 250'000;
  SimTime jitter = SimTime::millis(5);
  int broadcast_defer_frames = 4;

  int islots_for(std::size_t nodes) const {
    return n_islots > 0 ? n_islots : std::max(4, static_cast<int>(nodes / 2));
  }
};

/// Link layer shared by both modes. Unicast delivery status is reported to
/// the sender after the data transmission ends; there is no retransmission.
class Mac {
 public:
  struct Upcalls {
    std::function<void(NodeId receiver, const Frame& frame)> receive;
    std::function<void(NodeId sender, const Frame& frame, bool delivered)> tx_status;
    std::function<void(NodeId node, SimTime start, SimTime end)> awake;
  };

  Mac(Simulator& sim, Topology& topology, Medium& medium, const MacParams& params, RngStream& rng);
  virtual ~Mac() = default;

  void set_upcalls(Upcalls up) { up_ = std::move(up); }

  virtual void send(NodeId sender, NodeId receiver, Frame frame) = 0;
  virtual void broadcast(NodeId sender, Frame frame) = 0;
  virtual bool listening(NodeId node, SimTime start, SimTime end) const = 0;
  /// Awake time a node spends regardless of traffic, up to `until`.
  virtual void baseline_awake(RadioTimeline& tl, NodeId node, SimTime until) const = 0;

  virtual void on_outcomes(const FrameOnAir& fa, const std::vector<ReceiverOutcome>& outcomes);

  SimTime airtime(std::uint32_t bits) const;
  MacMode mode() const { return params_.mode; }
  const MacParams& params() const { return params_; }

 protected:
  Simulator& sim_;
  Topology& topology_;
  Medium& medium_;
  MacParams params_;
  RngStream& rng_;
  Upcalls up_;
};

class HmacMac final : public Mac {
 public:
  HmacMac(Simulator& sim, Topology& topology, Medium& medium, const MacParams& params, RngStream& rng,
          SlotSchedule schedule);

  void send(NodeId sender, NodeId receiver, Frame frame) override;
  void broadcast(NodeId sender, Frame frame) override;
  bool listening(NodeId node, SimTime start, SimTime end) const override;
  void baseline_awake(RadioTimeline& tl, NodeId node, SimTime until) const override;
  void on_outcomes(const FrameOnAir& fa, const std::vector<ReceiverOutcome>& outcomes) override;

  const SlotSchedule& schedule() const { return schedule_; }
  bool woken(NodeId node, std::int64_t frame, int islot) const;

 private:
  std::uint64_t wake_key(NodeId node, std::int64_t frame, int islot) const;
  std::int64_t claim_frame(NodeId sender, std::int64_t earliest);

  SlotSchedule schedule_;
  std::vector<std::int64_t> next_free_frame_;
  std::unordered_set<std::uint64_t> woken_;
};

/// Baseline without duty cycling: radios never sleep and frames go out
/// immediately after a random jitter.
class AlwaysOnMac final : public Mac {
 public:
  AlwaysOnMac(Simulator& sim, Topology& topology, Medium& medium, const MacParams& params, RngStream& rng,
              std::size_t nodes);

  void send(NodeId sender, NodeId receiver, Frame frame) override;
  void broadcast(NodeId sender, Frame frame) override;
  bool listening(NodeId node, SimTime start, SimTime end) const override;
  void baseline_awake(RadioTimeline& tl, NodeId node, SimTime until) const override;

 private:
  void enqueue(NodeId sender, Frame frame);
  std::vector<SimTime> busy_until_;
};

}  // namespace wsnsim

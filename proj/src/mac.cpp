#include "wsnsim/mac.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace wsnsim {

const char* to_string(MacMode m) { return m == MacMode::kHmac ? "hmac" : "always_on"; }

SlotSchedule::SlotSchedule(std::vector<NodeId> owners, SimTime wslot_len, SimTime islot_len, int n_islots)
    : owners_(std::move(owners)), wslot_len_(wslot_len), islot_len_(islot_len), n_islots_(n_islots) {
  for (std::size_t i = 0; i < owners_.size(); ++i) slot_of_[owners_[i]] = static_cast<int>(i);
}

int SlotSchedule::wslot_of(NodeId node) const {
  auto it = slot_of_.find(node);
  if (it == slot_of_.end()) throw std::out_of_range("node " + std::to_string(node) + " owns no W-SLOT");
  return it->second;
}

namespace {
std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return a <= 0 ? 0 : (a + b - 1) / b; }
}  // namespace

std::int64_t SlotSchedule::next_wslot_frame(SimTime t, NodeId owner) const {
  const SimTime offset = wslot_len_ * wslot_of(owner);
  return ceil_div((t - offset).us(), frame_len().us());
}

std::int64_t SlotSchedule::next_frame(SimTime t) const { return ceil_div(t.us(), frame_len().us()); }

SlotSchedule build_frame_schedule(std::vector<NodeId> node_ids, SimTime wslot_len, SimTime islot_len, int n_islots) {
  if (node_ids.empty()) throw std::invalid_argument("frame schedule needs at least one node");
  if (wslot_len <= SimTime{} || islot_len <= SimTime{}) throw std::invalid_argument("slot lengths must be positive");
  if (n_islots < 1) throw std::invalid_argument("at least one I-SLOT is required");
  if (!(wslot_len < islot_len)) throw std::invalid_argument("W-SLOT must be shorter than an I-SLOT");
  std::sort(node_ids.begin(), node_ids.end());
  if (std::adjacent_find(node_ids.begin(), node_ids.end()) != node_ids.end())
    throw std::invalid_argument("duplicate node id in frame schedule");
  return SlotSchedule(std::move(node_ids), wslot_len, islot_len, n_islots);
}

Mac::Mac(Simulator& sim, Topology& topology, Medium& medium, const MacParams& params, RngStream& rng)
    : sim_(sim), topology_(topology), medium_(medium), params_(params), rng_(rng) {}

SimTime Mac::airtime(std::uint32_t bits) const {
  const std::int64_t us = (static_cast<std::int64_t>(bits) * 1'000'000 + params_.bitrate - 1) / params_.bitrate;
  return SimTime::micros(std::max<std::int64_t>(us, 1));
}

void Mac::on_outcomes(const FrameOnAir& fa, const std::vector<ReceiverOutcome>& outcomes) {
  const Frame& f = fa.frame;
  if (f.kind == FrameKind::kWakeup) return;
  bool dst_ok = false;
  for (const auto& r : outcomes) {
    if (r.outcome != RxOutcome::kDelivered) continue;
    if (f.dst == kBroadcast || f.dst == r.node) {
      if (r.node == f.dst) dst_ok = true;
      if (up_.receive) up_.receive(r.node, f);
    }
  }
  if (f.dst != kBroadcast && up_.tx_status) up_.tx_status(fa.sender, f, dst_ok);
}

// ---------------------------------------------------------------- HMAC

HmacMac::HmacMac(Simulator& sim, Topology& topology, Medium& medium, const MacParams& params, RngStream& rng,
                 SlotSchedule schedule)
    : Mac(sim, topology, medium, params, rng),
      schedule_(std::move(schedule)),
      next_free_frame_(topology.size(), 0) {}

std::uint64_t HmacMac::wake_key(NodeId node, std::int64_t frame, int islot) const {
  const auto slots = static_cast<std::uint64_t>(schedule_.n_islots());
  return (static_cast<std::uint64_t>(frame) * slots + static_cast<std::uint64_t>(islot)) * topology_.size() +
         static_cast<std::uint64_t>(node);
}

bool HmacMac::woken(NodeId node, std::int64_t frame, int islot) const {
  return woken_.contains(wake_key(node, frame, islot));
}

std::int64_t HmacMac::claim_frame(NodeId sender, std::int64_t earliest) {
  auto& next = next_free_frame_.at(static_cast<std::size_t>(sender));
  const std::int64_t f = std::max(earliest, next);
  next = f + 1;
  return f;
}

void HmacMac::send(NodeId sender, NodeId receiver, Frame frame) {
  if (sender == receiver) throw std::logic_error("MAC send to self");
  if (frame.kind == FrameKind::kWakeup) throw std::logic_error("WAKEUP frames are MAC-internal");
  const SimTime dur = airtime(frame.payload_bits);
  if (dur > schedule_.islot_len()) throw std::logic_error("frame does not fit in one I-SLOT");

  const std::int64_t f = claim_frame(sender, schedule_.next_wslot_frame(sim_.now(), receiver));
  const int k = static_cast<int>(rng_.int_below(static_cast<std::uint64_t>(schedule_.n_islots())));

  Frame wake;
  wake.kind = FrameKind::kWakeup;
  wake.src = sender;
  wake.dst = receiver;
  wake.islot_index = k;
  medium_.transmit(sender, schedule_.wslot_start(f, receiver), schedule_.wslot_len(), std::move(wake));

  frame.src = sender;
  frame.dst = receiver;
  medium_.transmit(sender, schedule_.islot_start(f, k), dur, std::move(frame));
}

void HmacMac::broadcast(NodeId sender, Frame frame) {
  if (frame.kind == FrameKind::kWakeup) throw std::logic_error("WAKEUP frames are MAC-internal");
  const SimTime dur = airtime(frame.payload_bits);
  if (dur > schedule_.islot_len()) throw std::logic_error("frame does not fit in one I-SLOT");

  std::int64_t earliest = schedule_.next_frame(sim_.now());
  if (params_.broadcast_defer_frames > 1)
    earliest += static_cast<std::int64_t>(rng_.int_below(static_cast<std::uint64_t>(params_.broadcast_defer_frames)));
  const std::int64_t f = claim_frame(sender, earliest);
  const int k = static_cast<int>(rng_.int_below(static_cast<std::uint64_t>(schedule_.n_islots())));

  for (NodeId owner : schedule_.wslot_owners()) {
    if (owner == sender) continue;
    Frame wake;
    wake.kind = FrameKind::kWakeup;
    wake.src = sender;
    wake.dst = kBroadcast;
    wake.islot_index = k;
    medium_.transmit(sender, schedule_.wslot_start(f, owner), schedule_.wslot_len(), std::move(wake));
  }
  frame.src = sender;
  frame.dst = kBroadcast;
  medium_.transmit(sender, schedule_.islot_start(f, k), dur, std::move(frame));
}

bool HmacMac::listening(NodeId node, SimTime start, SimTime end) const {
  if (!topology_.alive(node)) return false;
  const std::int64_t f = start.us() / schedule_.frame_len().us();
  const SimTime base = schedule_.frame_start(f);
  if (end > base + schedule_.frame_len()) return false;
  const SimTime own = schedule_.wslot_start(f, node);
  if (start >= own && end <= own + schedule_.wslot_len()) return true;
  const SimTime islots_base = base + schedule_.wslot_len() * schedule_.n_wslots();
  if (start < islots_base) return false;
  const int k = static_cast<int>((start - islots_base).us() / schedule_.islot_len().us());
  if (k >= schedule_.n_islots()) return false;
  if (end > schedule_.islot_start(f, k) + schedule_.islot_len()) return false;
  return woken(node, f, k);
}

void HmacMac::baseline_awake(RadioTimeline& tl, NodeId node, SimTime until) const {
  for (std::int64_t f = 0;; ++f) {
    const SimTime s = schedule_.wslot_start(f, node);
    if (s >= until) break;
    tl.add_awake(s, std::min(s + schedule_.wslot_len(), until));
  }
}

void HmacMac::on_outcomes(const FrameOnAir& fa, const std::vector<ReceiverOutcome>& outcomes) {
  if (fa.frame.kind != FrameKind::kWakeup) {
    Mac::on_outcomes(fa, outcomes);
    return;
  }
  const std::int64_t f = fa.start.us() / schedule_.frame_len().us();
  const int k = fa.frame.islot_index;
  for (const auto& r : outcomes) {
    if (r.outcome != RxOutcome::kDelivered) continue;
    if (fa.frame.dst != kBroadcast && fa.frame.dst != r.node) continue;
    if (woken_.insert(wake_key(r.node, f, k)).second && up_.awake) {
      const SimTime s = schedule_.islot_start(f, k);
      up_.awake(r.node, s, s + schedule_.islot_len());
    }
  }
}

// ---------------------------------------------------------------- always-on

AlwaysOnMac::AlwaysOnMac(Simulator& sim, Topology& topology, Medium& medium, const MacParams& params,
                         RngStream& rng, std::size_t nodes)
    : Mac(sim, topology, medium, params, rng), busy_until_(nodes) {}

void AlwaysOnMac::enqueue(NodeId sender, Frame frame) {
  SimTime jitter;
  if (params_.jitter > SimTime{})
    jitter = SimTime::micros(static_cast<std::int64_t>(rng_.int_below(static_cast<std::uint64_t>(params_.jitter.us()))));
  auto& busy = busy_until_.at(static_cast<std::size_t>(sender));
  const SimTime start = std::max(sim_.now(), busy) + jitter;
  const SimTime dur = airtime(frame.payload_bits);
  busy = start + dur;
  frame.src = sender;
  medium_.transmit(sender, start, dur, std::move(frame));
}

void AlwaysOnMac::send(NodeId sender, NodeId receiver, Frame frame) {
  if (sender == receiver) throw std::logic_error("MAC send to self");
  frame.dst = receiver;
  enqueue(sender, std::move(frame));
}

void AlwaysOnMac::broadcast(NodeId sender, Frame frame) {
  frame.dst = kBroadcast;
  enqueue(sender, std::move(frame));
}

bool AlwaysOnMac::listening(NodeId node, SimTime, SimTime) const { return topology_.alive(node); }

void AlwaysOnMac::baseline_awake(RadioTimeline& tl, NodeId, SimTime until) const { tl.add_awake(SimTime{}, until); }

}  // namespace wsnsim

#include "wsnsim/radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wsnsim {

const char* to_string(FrameKind kind) {
  switch (kind) {
    case FrameKind::kWakeup: return "WAKEUP";
    case FrameKind::kData: return "DATA";
    case FrameKind::kRreq: return "RREQ";
    case FrameKind::kRrep: return "RREP";
    case FrameKind::kRerr: return "RERR";
    case FrameKind::kHello: return "HELLO";
  }
  return "?";
}

const char* to_string(RxOutcome o) {
  switch (o) {
    case RxOutcome::kDelivered: return "delivered";
    case RxOutcome::kCollided: return "collided";
    case RxOutcome::kOutOfRange: return "out_of_range";
    case RxOutcome::kRadioAsleep: return "radio_asleep";
  }
  return "?";
}

Topology::Topology(Arena arena, double range, std::vector<NodePose> poses)
    : arena_(arena), range_(range), poses_(std::move(poses)), alive_(poses_.size(), true) {
  if (!(range_ > 0.0)) throw std::invalid_argument("range must be positive");
  for (std::size_t i = 0; i < poses_.size(); ++i) {
    if (poses_[i].id != static_cast<NodeId>(i)) throw std::invalid_argument("node ids must be 0..n-1");
    const auto& p = poses_[i];
    if (p.x < 0 || p.x > arena_.width || p.y < 0 || p.y > arena_.height)
      throw std::invalid_argument("node " + std::to_string(i) + " outside the arena");
  }
}

void Topology::check(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= poses_.size())
    throw std::out_of_range("unknown node id " + std::to_string(id));
}

const NodePose& Topology::pose(NodeId id) const {
  check(id);
  return poses_[static_cast<std::size_t>(id)];
}

void Topology::kill(NodeId id) {
  check(id);
  alive_[static_cast<std::size_t>(id)] = false;
}

bool Topology::in_range(NodeId a, NodeId b) const {
  check(a);
  check(b);
  if (a == b) return false;
  const auto& pa = poses_[static_cast<std::size_t>(a)];
  const auto& pb = poses_[static_cast<std::size_t>(b)];
  const double dx = pa.x - pb.x;
  const double dy = pa.y - pb.y;
  return dx * dx + dy * dy <= range_ * range_;
}

std::vector<NodeId> Topology::neighbors(NodeId id) const {
  check(id);
  std::vector<NodeId> out;
  if (!alive(id)) return out;
  for (std::size_t j = 0; j < poses_.size(); ++j) {
    const auto other = static_cast<NodeId>(j);
    if (other != id && alive_[j] && in_range(id, other)) out.push_back(other);
  }
  return out;
}

void assign_waypoint(NodePose& pose, const Arena& arena, const MobilityParams& params, RngStream& rng) {
  pose.waypoint_x = rng.uniform01() * arena.width;
  pose.waypoint_y = rng.uniform01() * arena.height;
  pose.speed = params.v_min + rng.uniform01() * (params.v_max - params.v_min);
}

void Topology::step_mobility(double dt, RngStream& rng, const MobilityParams& params) {
  for (auto& p : poses_) {
    if (!p.mobile) continue;
    const double dx = p.waypoint_x - p.x;
    const double dy = p.waypoint_y - p.y;
    const double remaining = std::hypot(dx, dy);
    const double advance = p.speed * dt;
    if (advance >= remaining) {
      p.x = p.waypoint_x;
      p.y = p.waypoint_y;
      assign_waypoint(p, arena_, params, rng);
    } else {
      p.x += dx * (advance / remaining);
      p.y += dy * (advance / remaining);
    }
    p.x = std::clamp(p.x, 0.0, arena_.width);
    p.y = std::clamp(p.y, 0.0, arena_.height);
  }
}

std::vector<ReceiverOutcome> resolve_outcomes(const FrameOnAir& fa, std::span<const FrameOnAir> on_air,
                                              std::size_t node_count, const ListenPredicate& listening) {
  std::vector<ReceiverOutcome> out;
  out.reserve(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    const auto n = static_cast<NodeId>(i);
    if (n == fa.sender) continue;
    ReceiverOutcome r{n, RxOutcome::kDelivered};
    if (!std::binary_search(fa.audible.begin(), fa.audible.end(), n)) {
      r.outcome = RxOutcome::kOutOfRange;
    } else if (!listening(n, fa.start, fa.end)) {
      r.outcome = RxOutcome::kRadioAsleep;
    } else {
      for (const auto& o : on_air) {
        if (o.tx_id == fa.tx_id) continue;
        const bool overlaps = o.start < fa.end && fa.start < o.end;
        if (!overlaps) continue;
        if (o.sender == n ||
            (o.sender != fa.sender && std::binary_search(o.audible.begin(), o.audible.end(), n))) {
          r.outcome = RxOutcome::kCollided;
          break;
        }
      }
    }
    out.push_back(r);
  }
  return out;
}

void Medium::transmit(NodeId sender, SimTime start, SimTime duration, Frame frame) {
  if (duration <= SimTime{}) throw std::logic_error("frame duration must be positive");
  FrameOnAir fa;
  fa.tx_id = next_tx_id_++;
  fa.sender = sender;
  fa.start = start;
  fa.end = start + duration;
  fa.frame = std::move(frame);
  sim_.schedule(start, EventKind::kFrameStart, sender, [this, fa = std::move(fa)]() mutable { begin(std::move(fa)); });
}

void Medium::begin(FrameOnAir fa) {
  if (!topology_.alive(fa.sender)) {
    if (on_silenced_) on_silenced_(fa);
    return;
  }
  fa.audible = topology_.neighbors(fa.sender);
  longest_ = std::max(longest_, fa.end - fa.start);
  ++frames_sent_;
  if (on_tx_) on_tx_(fa.sender, fa.start, fa.end);
  if (on_start_) on_start_(fa);
  const auto id = fa.tx_id;
  const auto end = fa.end;
  const auto sender = fa.sender;
  on_air_.push_back(std::move(fa));
  sim_.schedule(end, EventKind::kFrameArrival, sender, [this, id] { finish(id); });
}

void Medium::finish(std::uint64_t tx_id) {
  const SimTime now = sim_.now();
  const auto it = std::find_if(on_air_.begin(), on_air_.end(), [&](const FrameOnAir& f) { return f.tx_id == tx_id; });
  if (it == on_air_.end()) throw std::logic_error("frame vanished from the medium");
  const FrameOnAir fa = *it;
  auto outcomes = resolve_outcomes(fa, on_air_, topology_.size(), listening_);
  for (const auto& r : outcomes) {
    if ((r.outcome == RxOutcome::kDelivered || r.outcome == RxOutcome::kCollided) && on_rx_)
      on_rx_(r.node, fa.start, fa.end);
  }
  // Frames ending at or before now - longest can no longer overlap anything
  // still unresolved.
  std::erase_if(on_air_, [&](const FrameOnAir& f) { return f.end + longest_ <= now && f.tx_id != tx_id; });
  if (on_outcome_) on_outcome_(fa, outcomes);
}

}  // namespace wsnsim

#include <algorithm>
#include <string>

#include "wsnsim/routing.hpp"

namespace wsnsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Frame make_frame(FrameKind kind, std::uint32_t bits, RoutingPayload payload) {
  Frame f;
  f.kind = kind;
  f.payload_bits = bits;
  f.payload = std::move(payload);
  return f;
}

}  // namespace

AomdvAgent::AomdvAgent(NodeId self, RoutingHost& host, RoutingParams params)
    : self_(self), host_(host), params_(params), table_(self) {}

std::size_t AomdvAgent::pending(NodeId destination) const {
  auto it = pending_.find(destination);
  return it == pending_.end() ? 0 : it->second.size();
}

void AomdvAgent::mutated(NodeId destination) { host_.route_changed(self_, destination); }

void AomdvAgent::purge() {
  for (NodeId d : table_.purge_expired(host_.now())) mutated(d);
}

void AomdvAgent::add_static_route(NodeId destination, NodeId next_hop, std::uint32_t hop_count) {
  static_routes_[destination] = PathRecord{next_hop, kNoNode, hop_count, cost(hop_count)};
}

std::optional<NodeId> AomdvAgent::select_next_hop(NodeId destination) {
  purge();
  std::vector<RouteCandidate> candidates;
  if (auto s = static_routes_.find(destination); s != static_routes_.end())
    candidates.push_back({params_.ad.static_routes, s->second.hop_count, s->second.energy_cost, s->second.next_hop});
  if (const RouteEntry* e = table_.find(destination)) {
    for (const auto& p : e->paths) candidates.push_back({params_.ad.aomdv, p.hop_count, p.energy_cost, p.next_hop});
  }
  return select_route(candidates);
}

// ------------------------------------------------------------------ data

void AomdvAgent::send_data(const DataPacket& p) {
  if (dead_) {
    host_.drop(self_, p, DropReason::kNodeDown);
    return;
  }
  route_or_queue(p, kNoNode);
}

void AomdvAgent::route_or_queue(const DataPacket& p, NodeId previous_hop) {
  if (auto nh = select_next_hop(p.destination)) {
    forward_data(p, *nh);
    return;
  }
  if (p.origin == self_) {
    pending_[p.destination].push_back(p);
    if (!discovery_.contains(p.destination)) start_discovery(p.destination);
    return;
  }
  host_.drop(self_, p, previous_hop == kNoNode ? DropReason::kLinkBreak : DropReason::kNoRoute);
  if (previous_hop != kNoNode) {
    const RouteEntry* e = table_.find(p.destination);
    send_rerr(previous_hop, {UnreachableDest{p.destination, e ? e->seq : 0}});
  }
}

void AomdvAgent::forward_data(const DataPacket& p, NodeId next_hop) {
  if (RouteEntry* e = table_.find(p.destination)) e->expiry = host_.now() + params_.route_expiry;
  host_.unicast(self_, next_hop, make_frame(FrameKind::kData, p.payload_bits + FrameSizes::kDataHeader, p));
}

void AomdvAgent::receive(const Frame& frame) {
  if (dead_) return;
  const NodeId prev = frame.src;
  std::visit(Overloaded{
                 [&](const DataPacket& p) {
                   host_.neighbor_seen(self_, prev);
                   DataPacket copy = p;
                   ++copy.hops;
                   if (copy.destination == self_) {
                     host_.deliver(self_, copy);
                     return;
                   }
                   if (RouteEntry* e = table_.find(copy.destination)) e->precursors.insert(prev);
                   route_or_queue(copy, prev);
                 },
                 [&](const RreqPacket& r) { process_rreq(r, prev); },
                 [&](const RrepPacket& r) { process_rrep(r, prev); },
                 [&](const RerrPacket& r) { process_rerr(r, prev); },
                 [](const auto&) {},
             },
             frame.payload);
}

void AomdvAgent::tx_status(const Frame& frame, bool delivered) {
  if (dead_) return;
  const NodeId nb = frame.dst;
  if (delivered) {
    fail_count_.erase(nb);
    return;
  }
  const bool broken = ++fail_count_[nb] >= params_.link_fail_threshold;
  if (broken) {
    fail_count_.erase(nb);
    handle_link_break(nb);
  }
  std::visit(Overloaded{
                 [&](const DataPacket& p) {
                   if (!broken) {
                     host_.unicast(self_, nb, frame);
                   } else {
                     route_or_queue(p, kNoNode);
                   }
                 },
                 [&](const RrepPacket&) {
                   if (!broken) host_.unicast(self_, nb, frame);
                 },
                 [](const auto&) {},
             },
             frame.payload);
}

void AomdvAgent::on_killed() {
  dead_ = true;
  for (auto& [dest, q] : pending_)
    for (const auto& p : q) host_.drop(self_, p, DropReason::kNodeDown);
  pending_.clear();
  for (auto& [dest, d] : discovery_) host_.cancel_timer(d.timer);
  discovery_.clear();
}

// ------------------------------------------------------------- discovery

void AomdvAgent::start_discovery(NodeId destination) {
  discovery_[destination] = Discovery{params_.rreq_retries, 0};
  originate_rreq(destination);
}

RreqId AomdvAgent::originate_rreq(NodeId destination) {
  ++own_seq_;
  const RreqId id{self_, next_broadcast_id_++};
  seen_[id];
  const RouteEntry* e = table_.find(destination);

  RreqPacket r;
  r.id = id;
  r.destination = destination;
  r.origin_seq = own_seq_;
  r.dest_seq_known = e ? e->seq : 0;
  r.hop_count = 0;
  r.first_hop = kNoNode;

  host_.rreq_originated(self_, destination);
  host_.trace(self_, "rreq_originate",
              "dst=" + std::to_string(destination) + " bid=" + std::to_string(id.broadcast_id));
  host_.broadcast(self_, make_frame(FrameKind::kRreq, FrameSizes::kRreq, r));

  auto [it, fresh] = discovery_.try_emplace(destination, Discovery{params_.rreq_retries, 0});
  if (!fresh) host_.cancel_timer(it->second.timer);
  it->second.timer = host_.schedule_timer(self_, params_.reply_wait, [this, destination] {
    on_reply_timeout(destination);
  });
  return id;
}

void AomdvAgent::on_reply_timeout(NodeId destination) {
  auto it = discovery_.find(destination);
  if (it == discovery_.end() || dead_) return;
  if (select_next_hop(destination)) {
    flush(destination);
    return;
  }
  if (it->second.retries_left > 0) {
    --it->second.retries_left;
    originate_rreq(destination);
    return;
  }
  discovery_.erase(it);
  auto node = pending_.extract(destination);
  if (!node.empty())
    for (const auto& p : node.mapped()) host_.drop(self_, p, DropReason::kNoRoute);
  host_.no_route(self_, destination);
}

void AomdvAgent::flush(NodeId destination) {
  if (auto it = discovery_.find(destination); it != discovery_.end()) {
    host_.cancel_timer(it->second.timer);
    discovery_.erase(it);
  }
  auto node = pending_.extract(destination);
  if (node.empty()) return;
  for (const auto& p : node.mapped()) route_or_queue(p, kNoNode);
}

AomdvAgent::RreqAction AomdvAgent::process_rreq(const RreqPacket& rreq, NodeId previous_hop) {
  if (dead_ || rreq.id.origin == self_) return RreqAction::kDiscard;
  host_.neighbor_seen(self_, previous_hop);
  purge();

  const std::uint32_t hops = rreq.hop_count + 1;
  const NodeId first_hop = rreq.hop_count == 0 ? self_ : rreq.first_hop;
  auto [seen, fresh] = seen_.try_emplace(rreq.id);
  if (!fresh && seen->second.first_hops.contains(first_hop)) return RreqAction::kDiscard;
  seen->second.first_hops.insert(first_hop);

  const NodeId origin = rreq.id.origin;
  const bool accepted = table_.insert_path(origin, rreq.origin_seq, previous_hop, first_hop, hops, cost(hops),
                                           host_.now() + params_.route_expiry);
  if (accepted) mutated(origin);

  if (!fresh) {
    if (!accepted) return RreqAction::kDiscard;
    // A destination answers each additional disjoint reverse path with a
    // copy of its reply so the origin can learn a matching forward path.
    if (rreq.destination == self_ && seen->second.replied_seq)
      send_rrep(RrepPacket{origin, self_, *seen->second.replied_seq, 0, kNoNode}, previous_hop);
    return RreqAction::kRecordOnly;
  }
  if (!accepted) return RreqAction::kDiscard;

  if (rreq.destination == self_) {
    own_seq_ = std::max(own_seq_, rreq.dest_seq_known) + 1;
    seen->second.replied_seq = own_seq_;
    host_.trace(self_, "rrep_originate", "origin=" + std::to_string(origin) + " seq=" + std::to_string(own_seq_));
    send_rrep(RrepPacket{origin, self_, own_seq_, 0, kNoNode}, previous_hop);
    return RreqAction::kReply;
  }

  const std::uint32_t adv = table_.advertise(origin);
  host_.advertised(self_, origin, rreq.origin_seq, adv);
  RreqPacket fwd = rreq;
  fwd.hop_count = adv;
  fwd.first_hop = first_hop;
  host_.rreq_rebroadcast(self_, rreq.id);
  host_.broadcast(self_, make_frame(FrameKind::kRreq, FrameSizes::kRreq, fwd));
  return RreqAction::kForward;
}

void AomdvAgent::send_rrep(const RrepPacket& rrep, NodeId next_hop) {
  host_.unicast(self_, next_hop, make_frame(FrameKind::kRrep, FrameSizes::kRrep, rrep));
}

AomdvAgent::RrepAction AomdvAgent::process_rrep(const RrepPacket& rrep, NodeId previous_hop) {
  if (dead_ || rrep.destination == self_) return RrepAction::kDiscard;
  purge();
  if (rrep.origin != self_) {
    const RouteEntry* rev = table_.find(rrep.origin);
    if (rev == nullptr || rev->paths.empty()) return RrepAction::kDiscard;  // orphan
  }
  host_.neighbor_seen(self_, previous_hop);

  const std::uint32_t hops = rrep.hop_count + 1;
  const NodeId last_hop = rrep.hop_count == 0 ? self_ : rrep.last_hop;
  const NodeId dest = rrep.destination;
  if (!table_.insert_path(dest, rrep.dest_seq, previous_hop, last_hop, hops, cost(hops),
                          host_.now() + params_.route_expiry))
    return RrepAction::kDiscard;
  mutated(dest);

  if (rrep.origin == self_) {
    host_.trace(self_, "route_ready", "dst=" + std::to_string(dest) + " seq=" + std::to_string(rrep.dest_seq));
    host_.route_ready(self_, dest);
    flush(dest);
    return RrepAction::kAcceptTerminal;
  }

  RouteEntry* rev = table_.find(rrep.origin);
  std::vector<PathRecord> ordered = rev->paths;
  std::sort(ordered.begin(), ordered.end(), [](const PathRecord& a, const PathRecord& b) {
    return std::tie(a.hop_count, a.energy_cost, a.next_hop) < std::tie(b.hop_count, b.energy_cost, b.next_hop);
  });
  auto& used = rrep_reverse_used_[{rrep.origin, dest, rrep.dest_seq}];
  auto pick = std::find_if(ordered.begin(), ordered.end(), [&](const PathRecord& p) { return !used.contains(p.next_hop); });
  const NodeId toward_origin = pick != ordered.end() ? pick->next_hop : ordered.front().next_hop;
  used.insert(toward_origin);

  table_.find(dest)->precursors.insert(toward_origin);
  rev->precursors.insert(previous_hop);
  rev->expiry = std::max(rev->expiry, host_.now() + params_.route_expiry);

  const std::uint32_t adv = table_.advertise(dest);
  host_.advertised(self_, dest, rrep.dest_seq, adv);
  RrepPacket fwd = rrep;
  fwd.hop_count = adv;
  fwd.last_hop = last_hop;
  send_rrep(fwd, toward_origin);
  return RrepAction::kAcceptForward;
}

// ----------------------------------------------------------- maintenance

void AomdvAgent::send_rerr(NodeId to, std::vector<UnreachableDest> list) {
  if (list.empty()) return;
  const auto bits = FrameSizes::kRerrBase + FrameSizes::kRerrPerDest * static_cast<std::uint32_t>(list.size());
  host_.unicast(self_, to, make_frame(FrameKind::kRerr, bits, RerrPacket{std::move(list)}));
}

void AomdvAgent::handle_link_break(NodeId dead_neighbor) {
  std::vector<NodeId> touched;
  const auto invalidated = table_.remove_next_hop(dead_neighbor, nullptr, true, &touched);
  for (NodeId d : touched) mutated(d);
  host_.trace(self_, "link_break",
              "nb=" + std::to_string(dead_neighbor) + " lost=" + std::to_string(invalidated.size()));

  std::map<NodeId, std::vector<UnreachableDest>> per_precursor;
  for (const auto& iv : invalidated)
    for (NodeId p : iv.precursors)
      if (p != dead_neighbor) per_precursor[p].push_back({iv.destination, iv.seq});
  for (auto& [p, list] : per_precursor) send_rerr(p, std::move(list));

  for (const auto& iv : invalidated)
    if (pending(iv.destination) > 0 && !discovery_.contains(iv.destination)) start_discovery(iv.destination);
}

void AomdvAgent::process_rerr(const RerrPacket& rerr, NodeId previous_hop) {
  if (dead_) return;
  host_.neighbor_seen(self_, previous_hop);
  std::map<NodeId, SeqNo> only;
  for (const auto& u : rerr.unreachable) only[u.destination] = u.seq;
  std::vector<NodeId> touched;
  const auto invalidated = table_.remove_next_hop(previous_hop, &only, false, &touched);
  for (NodeId d : touched) mutated(d);

  std::map<NodeId, std::vector<UnreachableDest>> per_precursor;
  for (const auto& iv : invalidated)
    for (NodeId p : iv.precursors)
      if (p != previous_hop) per_precursor[p].push_back({iv.destination, iv.seq});
  for (auto& [p, list] : per_precursor) send_rerr(p, std::move(list));

  for (const auto& iv : invalidated)
    if (pending(iv.destination) > 0 && !discovery_.contains(iv.destination)) start_discovery(iv.destination);
}

}  // namespace wsnsim

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

std::uint32_t route_bits(std::size_t hops) { return FrameSizes::kDsrPerHop * static_cast<std::uint32_t>(hops); }

Frame make_frame(FrameKind kind, std::uint32_t bits, RoutingPayload payload) {
  Frame f;
  f.kind = kind;
  f.payload_bits = bits;
  f.payload = std::move(payload);
  return f;
}

}  // namespace

DsrAgent::DsrAgent(NodeId self, RoutingHost& host, RoutingParams params)
    : self_(self), host_(host), params_(params) {}

const std::vector<NodeId>* DsrAgent::cached_route(NodeId destination) const {
  auto it = cache_.find(destination);
  return it == cache_.end() ? nullptr : &it->second;
}

void DsrAgent::send_data(const DataPacket& p) {
  if (dead_) {
    host_.drop(self_, p, DropReason::kNodeDown);
    return;
  }
  if (const auto* route = cached_route(p.destination)) {
    send_along(p, *route);
    return;
  }
  pending_[p.destination].push_back(p);
  if (!discovery_.contains(p.destination)) {
    discovery_[p.destination] = Discovery{params_.rreq_retries, 0};
    dsr_discover(p.destination);
  }
}

void DsrAgent::send_along(const DataPacket& p, const std::vector<NodeId>& route) {
  DsrData d{p, route, 1};
  const NodeId next = route.at(1);
  host_.unicast(self_, next,
                make_frame(FrameKind::kData, p.payload_bits + FrameSizes::kDataHeader + route_bits(route.size()), d));
}

void DsrAgent::dsr_discover(NodeId destination) {
  const std::uint32_t id = next_request_id_++;
  seen_.insert({self_, id});
  DsrRreq req{self_, destination, id, {self_}};
  host_.rreq_originated(self_, destination);
  host_.trace(self_, "rreq_originate", "dst=" + std::to_string(destination) + " bid=" + std::to_string(id));
  host_.broadcast(self_, make_frame(FrameKind::kRreq, FrameSizes::kRreq + route_bits(1), req));

  auto [it, fresh] = discovery_.try_emplace(destination, Discovery{params_.rreq_retries, 0});
  if (!fresh) host_.cancel_timer(it->second.timer);
  it->second.timer =
      host_.schedule_timer(self_, params_.reply_wait, [this, destination] { on_reply_timeout(destination); });
}

void DsrAgent::on_reply_timeout(NodeId destination) {
  auto it = discovery_.find(destination);
  if (it == discovery_.end() || dead_) return;
  if (it->second.retries_left > 0) {
    --it->second.retries_left;
    dsr_discover(destination);
    return;
  }
  discovery_.erase(it);
  auto node = pending_.extract(destination);
  if (!node.empty())
    for (const auto& p : node.mapped()) host_.drop(self_, p, DropReason::kNoRoute);
  host_.no_route(self_, destination);
}

void DsrAgent::receive(const Frame& frame) {
  if (dead_) return;
  const NodeId prev = frame.src;
  std::visit(Overloaded{
                 [&](const DsrRreq& r) { on_request(r, prev); },
                 [&](const DsrRrep& r) { on_reply(r, prev); },
                 [&](const DsrRerr& r) {
                   host_.neighbor_seen(self_, prev);
                   on_error(r);
                 },
                 [&](const DsrData& d) {
                   host_.neighbor_seen(self_, prev);
                   DsrData copy = d;
                   ++copy.packet.hops;
                   if (dsr_forward(copy) == ForwardResult::kNotOnRoute)
                     host_.drop(self_, copy.packet, DropReason::kNotOnRoute);
                 },
                 [](const auto&) {},
             },
             frame.payload);
}

void DsrAgent::on_request(const DsrRreq& req, NodeId previous_hop) {
  host_.neighbor_seen(self_, previous_hop);
  if (req.origin == self_) return;
  if (!seen_.insert({req.origin, req.request_id}).second) return;
  if (std::find(req.hops.begin(), req.hops.end(), self_) != req.hops.end()) return;

  DsrRreq grown = req;
  grown.hops.push_back(self_);
  if (req.destination == self_) {
    host_.trace(self_, "rrep_originate", "origin=" + std::to_string(req.origin));
    host_.unicast(self_, previous_hop,
                  make_frame(FrameKind::kRrep, FrameSizes::kRrep + route_bits(grown.hops.size()),
                             DsrRrep{grown.hops}));
    return;
  }
  host_.rreq_rebroadcast(self_, RreqId{req.origin, req.request_id});
  const auto bits = FrameSizes::kRreq + route_bits(grown.hops.size());
  host_.broadcast(self_, make_frame(FrameKind::kRreq, bits, std::move(grown)));
}

void DsrAgent::on_reply(const DsrRrep& rep, NodeId previous_hop) {
  host_.neighbor_seen(self_, previous_hop);
  const auto at = std::find(rep.route.begin(), rep.route.end(), self_);
  if (at == rep.route.end() || rep.route.size() < 2) return;
  const auto idx = static_cast<std::size_t>(at - rep.route.begin());
  if (idx == 0) {
    const NodeId dest = rep.route.back();
    if (cache_.contains(dest)) return;  // first reply wins
    cache_[dest] = rep.route;
    host_.route_changed(self_, dest);
    host_.trace(self_, "route_ready", "dst=" + std::to_string(dest) + " hops=" + std::to_string(rep.route.size() - 1));
    host_.route_ready(self_, dest);
    if (auto it = discovery_.find(dest); it != discovery_.end()) {
      host_.cancel_timer(it->second.timer);
      discovery_.erase(it);
    }
    auto node = pending_.extract(dest);
    if (!node.empty())
      for (const auto& p : node.mapped()) send_along(p, cache_[dest]);
    return;
  }
  host_.unicast(self_, rep.route[idx - 1],
                make_frame(FrameKind::kRrep, FrameSizes::kRrep + route_bits(rep.route.size()), rep));
}

DsrAgent::ForwardResult DsrAgent::dsr_forward(const DsrData& data) {
  if (data.index >= data.route.size() || data.route[data.index] != self_) return ForwardResult::kNotOnRoute;
  if (data.index + 1 == data.route.size()) {
    host_.deliver(self_, data.packet);
    return ForwardResult::kDelivered;
  }
  DsrData next = data;
  ++next.index;
  const NodeId to = next.route[next.index];
  const auto bits = data.packet.payload_bits + FrameSizes::kDataHeader + route_bits(data.route.size());
  host_.unicast(self_, to, make_frame(FrameKind::kData, bits, std::move(next)));
  return ForwardResult::kForwarded;
}

void DsrAgent::invalidate_link(NodeId from, NodeId to) {
  std::erase_if(cache_, [&](const auto& kv) {
    const auto& r = kv.second;
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
      if (r[i] == from && r[i + 1] == to) {
        host_.route_changed(self_, kv.first);
        return true;
      }
    return false;
  });
}

void DsrAgent::on_error(const DsrRerr& err) {
  invalidate_link(err.broken_from, err.broken_to);
  const auto at = std::find(err.back_route.begin(), err.back_route.end(), self_);
  if (at == err.back_route.end()) return;
  const auto idx = static_cast<std::size_t>(at - err.back_route.begin());
  if (idx + 1 >= err.back_route.size()) return;  // reached the origin
  const auto bits = FrameSizes::kRerrBase + route_bits(err.back_route.size());
  host_.unicast(self_, err.back_route[idx + 1], make_frame(FrameKind::kRerr, bits, err));
}

void DsrAgent::tx_status(const Frame& frame, bool delivered) {
  if (dead_) return;
  const NodeId nb = frame.dst;
  if (delivered) {
    fail_count_.erase(nb);
    return;
  }
  const bool broken = ++fail_count_[nb] >= params_.link_fail_threshold;
  if (!broken) {
    host_.unicast(self_, nb, frame);
    return;
  }
  fail_count_.erase(nb);
  host_.trace(self_, "link_break", "nb=" + std::to_string(nb));
  invalidate_link(self_, nb);

  if (const auto* d = std::get_if<DsrData>(&frame.payload)) {
    host_.drop(self_, d->packet, DropReason::kLinkBreak);
    const std::size_t here = d->index - 1;
    if (here > 0) {
      DsrRerr err;
      for (std::size_t i = here + 1; i-- > 0;) err.back_route.push_back(d->route[i]);
      err.broken_from = self_;
      err.broken_to = nb;
      const auto bits = FrameSizes::kRerrBase + route_bits(err.back_route.size());
      const NodeId prev = err.back_route[1];
      host_.unicast(self_, prev, make_frame(FrameKind::kRerr, bits, std::move(err)));
    }
  }
}

void DsrAgent::on_killed() {
  dead_ = true;
  for (auto& [dest, q] : pending_)
    for (const auto& p : q) host_.drop(self_, p, DropReason::kNodeDown);
  pending_.clear();
  for (auto& [dest, d] : discovery_) host_.cancel_timer(d.timer);
  discovery_.clear();
}

}  // namespace wsnsim

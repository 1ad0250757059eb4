#include "wsnsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <sstream>

#include "wsnsim/discovery.hpp"
#include "wsnsim/mac.hpp"

namespace wsnsim {

std::vector<NodePose> place_nodes(const ScenarioConfig& cfg) {
  std::vector<NodePose> poses(cfg.nodes);
  for (std::size_t i = 0; i < cfg.nodes; ++i) poses[i].id = static_cast<NodeId>(i);
  if (!cfg.placements.empty()) {
    for (auto& p : poses) {
      const Placement& pl = cfg.placements.at(p.id);
      p.x = pl.x;
      p.y = pl.y;
      p.mobile = pl.mobile;
    }
    return poses;
  }
  RngStream rng(cfg.seed, "placement");
  for (auto& p : poses) {
    p.x = rng.uniform01() * cfg.arena.width;
    p.y = rng.uniform01() * cfg.arena.height;
  }
  // Partial Fisher-Yates picks the mobile subset.
  const auto k = static_cast<std::size_t>(std::llround(cfg.mobile_fraction * static_cast<double>(cfg.nodes)));
  std::vector<std::size_t> ids(cfg.nodes);
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.int_below(ids.size() - i));
    std::swap(ids[i], ids[j]);
    poses[ids[i]].mobile = true;
  }
  return poses;
}

std::vector<StateSegment> clip_after_death(const std::vector<StateSegment>& segments, SimTime death) {
  std::vector<StateSegment> out;
  SimTime end;
  for (const auto& s : segments) {
    end = std::max(end, s.end);
    if (s.end <= death) {
      out.push_back(s);
    } else if (s.start < death) {
      out.push_back({s.start, death, s.state});
    }
  }
  if (death < end) {
    if (!out.empty() && out.back().state == RadioState::kSleep) {
      out.back().end = end;
    } else {
      out.push_back({death, end, RadioState::kSleep});
    }
  }
  return out;
}

namespace {

class Network final : public RoutingHost {
 public:
  Network(const ScenarioConfig& cfg, const RunOptions& opt);
  RunOutput run();

  SimTime now() const override { return sim_.now(); }
  void unicast(NodeId from, NodeId to, Frame frame) override {
    frame.src = from;
    mac_->send(from, to, std::move(frame));
  }
  void broadcast(NodeId from, Frame frame) override {
    frame.src = from;
    mac_->broadcast(from, std::move(frame));
  }
  EventId schedule_timer(NodeId node, SimTime delay, std::function<void()> fn) override {
    return sim_.schedule_in(delay, EventKind::kTimerExpiry, node, std::move(fn));
  }
  void cancel_timer(EventId id) override { sim_.cancel(id); }
  void deliver(NodeId at, const DataPacket& p) override;
  void drop(NodeId at, const DataPacket& p, DropReason why) override;
  void neighbor_seen(NodeId node, NodeId neighbor) override { discovered(node, neighbor); }
  void route_changed(NodeId node, NodeId destination) override;
  void advertised(NodeId node, NodeId destination, SeqNo seq, std::uint32_t hops) override;
  void rreq_originated(NodeId origin, NodeId destination) override;
  void rreq_rebroadcast(NodeId node, RreqId id) override;
  void no_route(NodeId origin, NodeId destination) override;
  void route_ready(NodeId origin, NodeId destination) override {
    tr_.route_ready.emplace_back(sim_.now(), origin, destination);
  }
  void trace(NodeId node, std::string_view event, const std::string& detail) override { log(node, event, detail); }

 private:
  bool routing_mode() const { return cfg_.mode == DiscoveryMode::kAomdv || cfg_.mode == DiscoveryMode::kDsr; }
  void log(NodeId node, std::string_view event, const std::string& detail);
  [[noreturn]] void violate(const std::string& what) const;
  void discovered(NodeId node, NodeId neighbor);
  void sample_adjacency();
  void drop_payload(NodeId at, const Frame& f, DropReason why);
  void on_outcomes(const FrameOnAir& fa, const std::vector<ReceiverOutcome>& outcomes);
  void generate(std::size_t flow, SimTime at);
  void mobility_step(SimTime at);
  void hello_slot_event(std::int64_t slot);
  void disco_slot_event(std::int64_t slot);
  bool disco_listening(NodeId node, SimTime start, SimTime end) const;
  void finish();

  const ScenarioConfig& cfg_;
  RunOptions opt_;
  Simulator sim_;
  Topology topo_;
  Medium medium_;
  RngStream mobility_rng_;
  RngStream mac_rng_;
  RngStream hello_rng_;
  RngStream disco_rng_;
  std::unique_ptr<Mac> mac_;
  std::vector<std::unique_ptr<RoutingAgent>> agents_;
  std::vector<AomdvAgent*> aomdv_;
  std::vector<DsrAgent*> dsr_;
  std::vector<const RouteTable*> tables_;
  std::vector<RadioTimeline> timelines_;
  std::vector<DiscoSchedule> disco_;
  std::map<std::tuple<NodeId, NodeId, SeqNo>, std::uint32_t> advertised_;
  std::set<std::pair<NodeId, RreqId>> rebroadcasts_;
  RunTrace tr_;
};

Network::Network(const ScenarioConfig& cfg, const RunOptions& opt)
    : cfg_(cfg),
      opt_(opt),
      topo_(cfg.arena, cfg.range, place_nodes(cfg)),
      medium_(sim_, topo_),
      mobility_rng_(cfg.seed, "mobility"),
      mac_rng_(cfg.seed, "mac"),
      hello_rng_(cfg.seed, "hello"),
      disco_rng_(cfg.seed, "disco"),
      timelines_(cfg.nodes) {
  const std::size_t n = cfg.nodes;
  tr_.nodes = n;
  tr_.run_length = cfg.run;
  tr_.ledger = NeighborLedger(n);
  tr_.transmitted.assign(n, false);
  tr_.woken.assign(n, false);
  tr_.died_at.assign(n, std::nullopt);

  // Waypoints come from the mobility stream so placement stays independent.
  {
    std::vector<NodePose> poses = topo_.poses();
    for (auto& p : poses)
      if (p.mobile) assign_waypoint(p, cfg.arena, cfg.mobility, mobility_rng_);
    topo_ = Topology(cfg.arena, cfg.range, std::move(poses));
  }

  medium_.set_tx_hook([this](NodeId node, SimTime s, SimTime e) {
    timelines_[static_cast<std::size_t>(node)].add_tx(s, e);
    tr_.transmitted[static_cast<std::size_t>(node)] = true;
  });
  medium_.set_rx_hook(
      [this](NodeId node, SimTime s, SimTime e) { timelines_[static_cast<std::size_t>(node)].add_rx(s, e); });
  medium_.set_start_hook([this](const FrameOnAir& fa) {
    const auto k = fa.frame.kind;
    ++tr_.frames_by_kind[static_cast<std::size_t>(k)];
    if (k == FrameKind::kRrep) ++tr_.control.rrep;
    if (k == FrameKind::kRerr) ++tr_.control.rerr;
    if (k == FrameKind::kWakeup) ++tr_.control.wakeup;
    if (k == FrameKind::kHello) ++tr_.control.hello;
    if (opt_.trace) {
      std::string d = std::string("kind=") + to_string(k) + " dst=" + std::to_string(fa.frame.dst) +
                      " end=" + format_seconds_fixed(fa.end);
      if (k == FrameKind::kWakeup) d += " islot=" + std::to_string(fa.frame.islot_index);
      log(fa.sender, "tx", d);
    }
  });
  medium_.set_silenced_hook([this](const FrameOnAir& fa) { drop_payload(fa.sender, fa.frame, DropReason::kNodeDown); });
  medium_.set_outcome_handler([this](const FrameOnAir& fa, const std::vector<ReceiverOutcome>& o) { on_outcomes(fa, o); });

  if (routing_mode()) {
    MacParams mp = cfg.mac;
    if (mp.mode == MacMode::kHmac) {
      std::vector<NodeId> ids(n);
      for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<NodeId>(i);
      auto schedule = build_frame_schedule(ids, mp.wslot_len, mp.islot_len, mp.islots_for(n));
      mac_ = std::make_unique<HmacMac>(sim_, topo_, medium_, mp, mac_rng_, std::move(schedule));
    } else {
      mac_ = std::make_unique<AlwaysOnMac>(sim_, topo_, medium_, mp, mac_rng_, n);
    }
    Mac* mac = mac_.get();
    medium_.set_listen_predicate([mac](NodeId node, SimTime s, SimTime e) { return mac->listening(node, s, e); });
    mac_->set_upcalls(Mac::Upcalls{
        [this](NodeId r, const Frame& f) {
          if (topo_.alive(r)) agents_[static_cast<std::size_t>(r)]->receive(f);
        },
        [this](NodeId s, const Frame& f, bool ok) {
          if (!topo_.alive(s)) {
            if (!ok) drop_payload(s, f, DropReason::kNodeDown);
            return;
          }
          agents_[static_cast<std::size_t>(s)]->tx_status(f, ok);
        },
        [this](NodeId node, SimTime s, SimTime e) {
          timelines_[static_cast<std::size_t>(node)].add_awake(s, e);
          tr_.woken[static_cast<std::size_t>(node)] = true;
        },
    });

    RoutingParams rp = cfg.routing;
    std::uint32_t max_bits = FrameSizes::kDataHeader;
    for (const auto& f : cfg.flows) max_bits = std::max(max_bits, f.payload_bits + FrameSizes::kDataHeader);
    rp.per_hop_cost = (cfg.power.tx_uw + cfg.power.rx_uw) * mac_->airtime(max_bits).us();

    for (std::size_t i = 0; i < n; ++i) {
      const auto id = static_cast<NodeId>(i);
      if (cfg.mode == DiscoveryMode::kAomdv) {
        auto a = std::make_unique<AomdvAgent>(id, *this, rp);
        aomdv_.push_back(a.get());
        tables_.push_back(&a->table());
        agents_.push_back(std::move(a));
      } else {
        auto a = std::make_unique<DsrAgent>(id, *this, rp);
        dsr_.push_back(a.get());
        agents_.push_back(std::move(a));
      }
    }
    if (cfg.mode == DiscoveryMode::kAomdv)
      for (const auto& r : cfg.static_routes) aomdv_[static_cast<std::size_t>(r.node)]->add_static_route(r.destination, r.next_hop, r.hops);

    for (std::size_t i = 0; i < cfg.flows.size(); ++i) {
      const SimTime start = cfg.flows[i].start;
      if (start < cfg.run)
        sim_.schedule(start, EventKind::kTrafficGeneration, cfg.flows[i].origin, [this, i, start] { generate(i, start); });
    }
  } else if (cfg.mode == DiscoveryMode::kHello) {
    sim_.schedule(SimTime{}, EventKind::kSlotBoundary, kGlobalTarget, [this] { hello_slot_event(0); });
  } else {
    for (std::size_t i = 0; i < n; ++i) disco_.push_back(default_disco_schedule(static_cast<NodeId>(i)));
    medium_.set_listen_predicate([this](NodeId node, SimTime s, SimTime e) { return disco_listening(node, s, e); });
    sim_.schedule(SimTime{}, EventKind::kSlotBoundary, kGlobalTarget, [this] { disco_slot_event(0); });
  }

  bool any_mobile = false;
  for (const auto& p : topo_.poses()) any_mobile = any_mobile || p.mobile;
  if (any_mobile && cfg.mobility_step <= cfg.run) {
    const SimTime first = cfg.mobility_step;
    sim_.schedule(first, EventKind::kMobilityStep, kGlobalTarget, [this, first] { mobility_step(first); });
  }

  for (const auto& f : cfg.failures) {
    if (f.at > cfg.run) continue;
    const NodeId node = f.node;
    sim_.schedule(f.at, EventKind::kNodeFailure, node, [this, node] {
      if (!topo_.alive(node)) return;
      topo_.kill(node);
      tr_.died_at[static_cast<std::size_t>(node)] = sim_.now();
      log(node, "node_down", "");
      if (!agents_.empty()) agents_[static_cast<std::size_t>(node)]->on_killed();
    });
  }
  sample_adjacency();
}

void Network::log(NodeId node, std::string_view event, const std::string& detail) {
  if (!opt_.trace) return;
  std::string line = format_seconds_fixed(sim_.now());
  line += ' ';
  line += event;
  line += " node=" + std::to_string(node);
  if (!detail.empty()) line += " " + detail;
  tr_.lines.push_back({sim_.now(), std::move(line)});
}

void Network::violate(const std::string& what) const { throw InvariantViolation(what, sim_.dispatched()); }

void Network::discovered(NodeId node, NodeId neighbor) {
  if (tr_.ledger.record(node, neighbor, sim_.now())) log(node, "discover", "nb=" + std::to_string(neighbor));
}

void Network::sample_adjacency() {
  for (std::size_t i = 0; i < cfg_.nodes; ++i) {
    const auto id = static_cast<NodeId>(i);
    for (NodeId nb : topo_.neighbors(id)) tr_.true_pairs.emplace(id, nb);
  }
}

void Network::drop_payload(NodeId at, const Frame& f, DropReason why) {
  if (const auto* p = std::get_if<DataPacket>(&f.payload)) drop(at, *p, why);
  if (const auto* d = std::get_if<DsrData>(&f.payload)) drop(at, d->packet, why);
}

void Network::deliver(NodeId at, const DataPacket& p) {
  if (at != p.destination) violate("packet " + std::to_string(p.id) + " delivered at the wrong node");
  try {
    tr_.packets.deliver(p, sim_.now());
  } catch (const std::logic_error& e) {
    violate(e.what());
  }
  log(at, "deliver", "pkt=" + std::to_string(p.id) + " hops=" + std::to_string(p.hops));
}

void Network::drop(NodeId at, const DataPacket& p, DropReason why) {
  try {
    tr_.packets.drop(p, at, why, sim_.now());
  } catch (const std::logic_error& e) {
    violate(e.what());
  }
  log(at, "drop", "pkt=" + std::to_string(p.id) + " reason=" + to_string(why));
}

void Network::route_changed(NodeId node, NodeId destination) {
  ++tr_.route_mutations;
  if (opt_.trace && !aomdv_.empty()) {
    std::ostringstream d;
    d << "dst=" << destination;
    if (const RouteEntry* e = aomdv_[static_cast<std::size_t>(node)]->table().find(destination)) {
      d << " seq=" << e->seq << " paths=";
      for (std::size_t i = 0; i < e->paths.size(); ++i)
        d << (i ? "," : "") << e->paths[i].next_hop << '/' << e->paths[i].last_hop << '/' << e->paths[i].hop_count;
    }
    log(node, "route", d.str());
  } else if (opt_.trace) {
    log(node, "route", "dst=" + std::to_string(destination));
  }
  if (!opt_.check || aomdv_.empty()) return;
  ++tr_.invariant_checks;
  if (has_next_hop_cycle(tables_, destination))
    violate("next-hop cycle towards " + std::to_string(destination) + " after a change at node " +
            std::to_string(node));
  if (const RouteEntry* e = tables_[static_cast<std::size_t>(node)]->find(destination); e && !paths_disjoint(*e))
    violate("node " + std::to_string(node) + " holds non-disjoint paths to " + std::to_string(destination));
}

void Network::advertised(NodeId node, NodeId destination, SeqNo seq, std::uint32_t hops) {
  if (!opt_.check) return;
  auto [it, fresh] = advertised_.try_emplace({node, destination, seq}, hops);
  if (!fresh && it->second != hops)
    violate("node " + std::to_string(node) + " changed its advertised hop count for " + std::to_string(destination) +
            " seq " + std::to_string(seq));
}

void Network::rreq_originated(NodeId origin, NodeId destination) {
  ++tr_.control.rreq_originated;
  tr_.rreq_originations.emplace_back(sim_.now(), origin);
  (void)destination;
}

void Network::rreq_rebroadcast(NodeId node, RreqId id) {
  ++tr_.control.rreq_forwarded;
  if (opt_.check && !rebroadcasts_.insert({node, id}).second)
    violate("node " + std::to_string(node) + " rebroadcast request " + std::to_string(id.origin) + "/" +
            std::to_string(id.broadcast_id) + " twice");
}

void Network::no_route(NodeId origin, NodeId destination) {
  tr_.no_route.emplace_back(origin, destination);
  log(origin, "no_route", "dst=" + std::to_string(destination));
}

void Network::on_outcomes(const FrameOnAir& fa, const std::vector<ReceiverOutcome>& outcomes) {
  const Frame& f = fa.frame;
  for (const auto& r : outcomes) {
    const bool intended = f.dst == kBroadcast || f.dst == r.node;
    if (!intended) continue;
    if (r.outcome == RxOutcome::kCollided) ++tr_.collisions;
    if (opt_.trace && (r.outcome == RxOutcome::kCollided || f.dst == r.node))
      log(r.node, "rx", std::string("from=") + std::to_string(fa.sender) + " kind=" + to_string(f.kind) +
                            " outcome=" + to_string(r.outcome));
  }
  if (mac_) {
    mac_->on_outcomes(fa, outcomes);
    return;
  }
  for (const auto& r : outcomes)
    if (r.outcome == RxOutcome::kDelivered) discovered(r.node, fa.sender);
}

void Network::generate(std::size_t flow, SimTime at) {
  const FlowSpec& f = cfg_.flows[flow];
  const DataPacket p = tr_.packets.create(f.origin, f.destination, at, f.payload_bits);
  log(f.origin, "send", "pkt=" + std::to_string(p.id) + " dst=" + std::to_string(f.destination));
  agents_[static_cast<std::size_t>(f.origin)]->send_data(p);
  const SimTime next = at + f.interval();
  const SimTime stop = f.stop ? std::min(*f.stop, cfg_.run) : cfg_.run;
  if (next < stop)
    sim_.schedule(next, EventKind::kTrafficGeneration, f.origin, [this, flow, next] { generate(flow, next); });
}

void Network::mobility_step(SimTime at) {
  topo_.step_mobility(cfg_.mobility_step.to_seconds(), mobility_rng_, cfg_.mobility);
  sample_adjacency();
  log(kGlobalTarget, "mobility", "");
  const SimTime next = at + cfg_.mobility_step;
  if (next <= cfg_.run)
    sim_.schedule(next, EventKind::kMobilityStep, kGlobalTarget, [this, next] { mobility_step(next); });
}

void Network::hello_slot_event(std::int64_t slot) {
  const SimTime start = cfg_.hello_slot * slot;
  const std::size_t n = cfg_.nodes;
  Adjacency adj(n);
  for (std::size_t i = 0; i < n; ++i) adj[i] = topo_.neighbors(static_cast<NodeId>(i));
  std::vector<bool> talkers;
  const auto found = hello_slot(adj, cfg_.hello_talk_prob, hello_rng_, &talkers);

  const std::int64_t air_us = (static_cast<std::int64_t>(FrameSizes::kHello) * 1'000'000 + cfg_.mac.bitrate - 1) /
                              cfg_.mac.bitrate;
  const SimTime end = std::min(start + SimTime::micros(std::max<std::int64_t>(air_us, 1)),
                               std::min(start + cfg_.hello_slot, cfg_.run));
  for (std::size_t i = 0; i < n; ++i) {
    if (!talkers[i] || !topo_.alive(static_cast<NodeId>(i))) continue;
    ++tr_.frames_sent;
    ++tr_.control.hello;
    ++tr_.frames_by_kind[static_cast<std::size_t>(FrameKind::kHello)];
    tr_.transmitted[i] = true;
    if (start < end) timelines_[i].add_tx(start, end);
  }
  for (const auto& d : found) {
    if (start < end) timelines_[static_cast<std::size_t>(d.listener)].add_rx(start, end);
    discovered(d.listener, d.talker);
  }
  const SimTime next = cfg_.hello_slot * (slot + 1);
  if (next < cfg_.run)
    sim_.schedule(next, EventKind::kSlotBoundary, kGlobalTarget, [this, slot] { hello_slot_event(slot + 1); });
}

bool Network::disco_listening(NodeId node, SimTime start, SimTime end) const {
  if (!topo_.alive(node)) return false;
  const std::int64_t slot = start.us() / cfg_.disco_slot.us();
  if (end > cfg_.disco_slot * (slot + 1)) return false;
  return disco_awake(disco_[static_cast<std::size_t>(node)], slot);
}

void Network::disco_slot_event(std::int64_t slot) {
  const SimTime start = cfg_.disco_slot * slot;
  const SimTime slot_end = std::min(start + cfg_.disco_slot, cfg_.run);
  const std::int64_t air_us = std::max<std::int64_t>(
      (static_cast<std::int64_t>(FrameSizes::kBeacon) * 1'000'000 + cfg_.mac.bitrate - 1) / cfg_.mac.bitrate, 1);
  for (std::size_t i = 0; i < cfg_.nodes; ++i) {
    const auto id = static_cast<NodeId>(i);
    if (!topo_.alive(id) || !disco_awake(disco_[i], slot)) continue;
    timelines_[i].add_awake(start, slot_end);
    const std::int64_t room = std::max<std::int64_t>(cfg_.disco_slot.us() - air_us + 1, 1);
    const SimTime at = start + SimTime::micros(static_cast<std::int64_t>(disco_rng_.int_below(static_cast<std::uint64_t>(room))));
    if (at + SimTime::micros(air_us) > cfg_.run) continue;
    Frame beacon;
    beacon.kind = FrameKind::kHello;
    beacon.src = id;
    beacon.dst = kBroadcast;
    beacon.payload_bits = FrameSizes::kBeacon;
    beacon.payload = Beacon{};
    medium_.transmit(id, at, SimTime::micros(air_us), std::move(beacon));
  }
  const SimTime next = cfg_.disco_slot * (slot + 1);
  if (next < cfg_.run)
    sim_.schedule(next, EventKind::kSlotBoundary, kGlobalTarget, [this, slot] { disco_slot_event(slot + 1); });
}

void Network::finish() {
  tr_.events = sim_.dispatched();
  tr_.frames_sent += medium_.frames_sent();
  const std::size_t n = cfg_.nodes;
  EnergyLedger ledger(n, cfg_.power);
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<NodeId>(i);
    const SimTime until = tr_.died_at[i].value_or(cfg_.run);
    if (mac_) {
      mac_->baseline_awake(timelines_[i], id, until);
    } else if (cfg_.mode == DiscoveryMode::kHello && until > SimTime{}) {
      timelines_[i].add_awake(SimTime{}, until);
    }
    auto segs = timelines_[i].segments(cfg_.run);
    if (tr_.died_at[i]) segs = clip_after_death(segs, *tr_.died_at[i]);
    try {
      for (const auto& s : segs) ledger.accrue_state(id, s.state, s.start, s.end);
    } catch (const std::logic_error& e) {
      violate("node " + std::to_string(i) + " radio timeline: " + e.what());
    }
    tr_.states.push_back(std::move(segs));
  }
  try {
    ledger.finalize(cfg_.run);
  } catch (const std::logic_error& e) {
    violate(std::string("energy partition: ") + e.what());
  }
  for (std::size_t i = 0; i < n; ++i) tr_.energy.push_back(ledger.node(static_cast<NodeId>(i)));

  std::size_t delivered = 0;
  std::size_t dropped = 0;
  std::size_t in_flight = 0;
  for (const auto& r : tr_.packets.records()) {
    if (r.status == PacketStatus::kDelivered) ++delivered;
    if (r.status == PacketStatus::kDropped) ++dropped;
    if (r.status == PacketStatus::kInFlight) ++in_flight;
  }
  if (delivered + dropped + in_flight != tr_.packets.sent() || delivered != tr_.packets.delivered() ||
      dropped != tr_.packets.dropped())
    violate("packet conservation");

  for (const auto* a : aomdv_) tr_.final_tables.push_back(a->table());
  for (const auto* a : dsr_) tr_.final_source_routes.push_back(a->cache());

  if (opt_.trace) {
    for (const auto* a : aomdv_) {
      for (const auto& [dest, e] : a->table().entries()) {
        std::ostringstream d;
        d << "dst=" << dest << " seq=" << e.seq << " adv=";
        if (e.advertised_hop_count) {
          d << *e.advertised_hop_count;
        } else {
          d << '-';
        }
        d << " paths=";
        for (std::size_t i = 0; i < e.paths.size(); ++i)
          d << (i ? "," : "") << e.paths[i].next_hop << '/' << e.paths[i].last_hop << '/' << e.paths[i].hop_count;
        log(a->id(), "route_snapshot", d.str());
      }
    }
  }
}

RunOutput Network::run() {
  sim_.run_until(cfg_.run);
  finish();
  RunOutput out;
  out.report = compute_metrics(tr_);
  out.trace = std::move(tr_);
  return out;
}

}  // namespace

RunOutput run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  validate_scenario(cfg);
  Network net(cfg, options);
  return net.run();
}

}  // namespace wsnsim

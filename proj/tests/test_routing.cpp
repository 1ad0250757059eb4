#include <doctest.h>

#include <deque>
#include <map>
#include <memory>
#include <stdexcept>

#include "wsnsim/routing.hpp"

using namespace wsnsim;

namespace {

constexpr SimTime kFar = SimTime::seconds(100);

// Lossless in-memory network: frames reach exactly the adjacent agents, in
// FIFO order; timers fire only when asked.
class FakeNet final : public RoutingHost {
 public:
  explicit FakeNet(std::vector<std::vector<NodeId>> adj) : adj_(std::move(adj)) {}

  template <class Agent>
  std::vector<Agent*> make_agents(RoutingParams p = {}) {
    std::vector<Agent*> out;
    for (std::size_t i = 0; i < adj_.size(); ++i) {
      auto a = std::make_unique<Agent>(static_cast<NodeId>(i), *this, p);
      out.push_back(a.get());
      agents_.push_back(std::move(a));
    }
    return out;
  }

  SimTime now() const override { return now_; }
  void unicast(NodeId from, NodeId to, Frame f) override {
    f.src = from;
    f.dst = to;
    queue_.push_back(f);
    ++unicasts;
  }
  void broadcast(NodeId from, Frame f) override {
    f.src = from;
    f.dst = kBroadcast;
    queue_.push_back(f);
    ++broadcasts;
  }
  EventId schedule_timer(NodeId, SimTime delay, std::function<void()> fn) override {
    timers_[next_timer_] = {now_ + delay, std::move(fn)};
    return next_timer_++;
  }
  void cancel_timer(EventId id) override { timers_.erase(id); }
  void deliver(NodeId at, const DataPacket& p) override { delivered.emplace_back(at, p.id); }
  void drop(NodeId at, const DataPacket& p, DropReason why) override { dropped.push_back({at, p.id, why}); }
  void neighbor_seen(NodeId, NodeId) override {}
  void route_changed(NodeId, NodeId) override { ++mutations; }
  void advertised(NodeId, NodeId, SeqNo, std::uint32_t) override {}
  void rreq_originated(NodeId origin, NodeId) override { rreqs.push_back(origin); }
  void rreq_rebroadcast(NodeId, RreqId) override {}
  void no_route(NodeId origin, NodeId destination) override { no_routes.emplace_back(origin, destination); }
  void route_ready(NodeId origin, NodeId destination) override { ready.emplace_back(origin, destination); }
  void trace(NodeId, std::string_view, const std::string&) override {}

  bool linked(NodeId a, NodeId b) const {
    for (NodeId n : adj_.at(static_cast<std::size_t>(a)))
      if (n == b) return true;
    return false;
  }
  void cut(NodeId a, NodeId b) {
    std::erase(adj_[static_cast<std::size_t>(a)], b);
    std::erase(adj_[static_cast<std::size_t>(b)], a);
  }

  // Drains the frame queue; unicasts to non-neighbours fail (reported back).
  void pump() {
    while (!queue_.empty()) {
      Frame f = queue_.front();
      queue_.pop_front();
      auto& from = *agents_.at(static_cast<std::size_t>(f.src));
      if (f.dst == kBroadcast) {
        for (NodeId n : adj_.at(static_cast<std::size_t>(f.src))) agents_.at(static_cast<std::size_t>(n))->receive(f);
        continue;
      }
      const bool ok = linked(f.src, f.dst);
      if (ok) agents_.at(static_cast<std::size_t>(f.dst))->receive(f);
      from.tx_status(f, ok);
    }
  }

  // Fires the earliest pending timer; false when none is left.
  bool fire_next_timer() {
    if (timers_.empty()) return false;
    auto it = std::min_element(timers_.begin(), timers_.end(),
                               [](const auto& a, const auto& b) { return a.second.first < b.second.first; });
    now_ = std::max(now_, it->second.first);
    auto fn = std::move(it->second.second);
    timers_.erase(it);
    fn();
    pump();
    return true;
  }

  DataPacket packet(NodeId o, NodeId d) { return DataPacket{next_packet_++, o, d, now_, 512, 0}; }

  struct Drop {
    NodeId at;
    PacketId id;
    DropReason why;
  };
  std::vector<std::pair<NodeId, PacketId>> delivered;
  std::vector<Drop> dropped;
  std::vector<NodeId> rreqs;
  std::vector<std::pair<NodeId, NodeId>> no_routes, ready;
  int unicasts = 0, broadcasts = 0, mutations = 0;
  SimTime now_;

 private:
  std::vector<std::vector<NodeId>> adj_;
  std::vector<std::unique_ptr<RoutingAgent>> agents_;
  std::deque<Frame> queue_;
  std::map<EventId, std::pair<SimTime, std::function<void()>>> timers_;
  EventId next_timer_ = 1;
  PacketId next_packet_ = 0;
};

// A=0, B=1, C=2, D=3: A-B-D and A-C-D.
std::vector<std::vector<NodeId>> diamond() { return {{1, 2}, {0, 3}, {0, 3}, {1, 2}}; }
std::vector<std::vector<NodeId>> line(std::size_t n) {
  std::vector<std::vector<NodeId>> adj(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    adj[i].push_back(static_cast<NodeId>(i + 1));
    adj[i + 1].push_back(static_cast<NodeId>(i));
  }
  return adj;
}

}  // namespace

TEST_CASE("route selection: AD class, then hops, energy, next hop") {
  const std::vector<RouteCandidate> c{{1, 2, 50, 7}, {0, 5, 900, 9}, {1, 1, 900, 8}};
  CHECK(select_route(c) == 9);  // static class wins regardless of length
  const std::vector<RouteCandidate> d{{1, 3, 10, 4}, {1, 2, 90, 6}, {1, 2, 30, 5}, {1, 2, 30, 3}};
  CHECK(select_route(d) == 3);
  CHECK_FALSE(select_route(std::vector<RouteCandidate>{}));
}

TEST_CASE("route selection is invariant to the energy unit") {
  RngStream rng(9, "test");
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RouteCandidate> c;
    for (int i = 0; i < 5; ++i)
      c.push_back({static_cast<int>(rng.int_below(2)), static_cast<std::uint32_t>(1 + rng.int_below(4)),
                   static_cast<Picojoules>(rng.int_below(1000)), static_cast<NodeId>(i)});
    auto scaled = c;
    for (auto& s : scaled) s.energy_cost *= 1000;
    CHECK(select_route(c) == select_route(scaled));
  }
}

TEST_CASE("insert_path acceptance rules") {
  RouteTable t(0);
  CHECK(t.insert_path(9, 3, 1, 5, 2, 0, kFar));
  CHECK_FALSE(t.insert_path(9, 2, 2, 6, 1, 0, kFar));   // older seq
  CHECK_FALSE(t.insert_path(9, 3, 1, 6, 2, 0, kFar));   // next hop reused
  CHECK_FALSE(t.insert_path(9, 3, 2, 5, 2, 0, kFar));   // last hop reused
  CHECK(t.insert_path(9, 3, 2, 6, 4, 0, kFar));         // disjoint, no advertisement yet
  CHECK(t.advertise(9) == 4);
  CHECK_FALSE(t.insert_path(9, 3, 3, 7, 4, 0, kFar));   // not below the advertised count
  CHECK(t.insert_path(9, 3, 3, 7, 3, 0, kFar));
  CHECK(t.advertise(9) == 4);                           // fixed per (destination, seq)
  CHECK(t.find(9)->paths.size() == 3);
  CHECK(paths_disjoint(*t.find(9)));

  CHECK(t.insert_path(9, 4, 1, 5, 6, 0, kFar));  // newer seq resets the entry
  CHECK(t.find(9)->paths.size() == 1);
  CHECK_FALSE(t.find(9)->advertised_hop_count);
  CHECK(t.advertise(9) == 6);

  CHECK_FALSE(t.insert_path(0, 1, 1, 1, 1, 0, kFar));  // route to self
  CHECK_FALSE(t.insert_path(8, 1, 0, 0, 1, 0, kFar));  // next hop is self
  CHECK_THROWS_AS(t.insert_path(8, 1, 1, 1, 0, 0, kFar), std::logic_error);
  CHECK_THROWS_AS(t.advertise(77), std::logic_error);
}

TEST_CASE("mutual advertisements cannot close a loop") {
  // X=1 and Y=2 both reach D=9 at seq 5 in 2 hops and advertise 2. Each then
  // hears the other's advertisement, offering a 3-hop path through the other.
  RouteTable x(1), y(2);
  REQUIRE(x.insert_path(9, 5, 3, 3, 2, 0, kFar));
  REQUIRE(y.insert_path(9, 5, 4, 4, 2, 0, kFar));
  const auto ax = x.advertise(9), ay = y.advertise(9);
  CHECK_FALSE(x.insert_path(9, 5, 2, 4, ay + 1, 0, kFar));
  CHECK_FALSE(y.insert_path(9, 5, 1, 3, ax + 1, 0, kFar));
  CHECK_FALSE(has_next_hop_cycle({nullptr, &x, &y}, 9));
}

TEST_CASE("next-hop cycle detection") {
  RouteTable a(0), b(1), c(2);
  a.insert_path(3, 1, 1, 1, 2, 0, kFar);
  b.insert_path(3, 1, 2, 2, 2, 0, kFar);
  c.insert_path(3, 1, 3, 2, 1, 0, kFar);
  CHECK_FALSE(has_next_hop_cycle({&a, &b, &c, nullptr}, 3));
  c.insert_path(3, 2, 0, 0, 3, 0, kFar);  // 0 -> 1 -> 2 -> 0
  CHECK(has_next_hop_cycle({&a, &b, &c, nullptr}, 3));
  CHECK_FALSE(has_next_hop_cycle({&a, &b, &c, nullptr}, 7));
}

TEST_CASE("removing a next hop invalidates and bumps seq") {
  RouteTable t(0);
  t.insert_path(5, 2, 1, 1, 1, 0, kFar);
  t.insert_path(6, 7, 1, 4, 3, 0, kFar);
  t.insert_path(6, 7, 2, 3, 2, 0, kFar);
  t.find(5)->precursors = {8, 9};
  std::vector<NodeId> touched;
  const auto inv = t.remove_next_hop(1, nullptr, true, &touched);
  CHECK(touched == std::vector<NodeId>{5, 6});
  REQUIRE(inv.size() == 1);
  CHECK(inv[0].destination == 5);
  CHECK(inv[0].seq == 3);
  CHECK(inv[0].precursors == std::set<NodeId>{8, 9});
  CHECK(t.find(6)->paths.size() == 1);
  CHECK(t.find(5)->paths.empty());

  const std::map<NodeId, SeqNo> only{{6, 11}};
  const auto inv2 = t.remove_next_hop(2, &only, false, nullptr);
  REQUIRE(inv2.size() == 1);
  CHECK(inv2[0].seq == 11);
}

TEST_CASE("expired paths are purged but seq survives") {
  RouteTable t(0);
  t.insert_path(5, 4, 1, 1, 1, 0, SimTime::seconds(10));
  CHECK(t.purge_expired(SimTime::seconds(9)).empty());
  CHECK(t.purge_expired(SimTime::seconds(10)) == std::vector<NodeId>{5});
  CHECK(t.find(5)->paths.empty());
  CHECK(t.find(5)->seq == 4);
}

TEST_CASE("aomdv: destination replies with a fresh seq, intermediate forwards") {
  FakeNet net(line(3));
  RoutingParams p;
  auto ag = net.make_agents<AomdvAgent>(p);
  RreqPacket r{RreqId{0, 0}, 2, 1, 0, 0, kNoNode};
  CHECK(ag[1]->process_rreq(r, 0) == AomdvAgent::RreqAction::kForward);
  CHECK(ag[1]->table().find(0)->paths.at(0).hop_count == 1);
  CHECK(ag[1]->process_rreq(r, 0) == AomdvAgent::RreqAction::kDiscard);  // duplicate, same first hop

  RreqPacket at_dest{RreqId{0, 0}, 2, 1, 4, 1, 1};
  CHECK(ag[2]->process_rreq(at_dest, 1) == AomdvAgent::RreqAction::kReply);
  CHECK(ag[2]->own_seq() == 5);  // max(own 0, known 4) + 1
}

TEST_CASE("aomdv: duplicate via a disjoint first hop is recorded and answered") {
  FakeNet net(diamond());
  auto ag = net.make_agents<AomdvAgent>();
  const RreqPacket via_b{RreqId{0, 0}, 3, 1, 0, 1, 1};
  const RreqPacket via_c{RreqId{0, 0}, 3, 1, 0, 1, 2};
  CHECK(ag[3]->process_rreq(via_b, 1) == AomdvAgent::RreqAction::kReply);
  const int before = net.unicasts;
  CHECK(ag[3]->process_rreq(via_c, 2) == AomdvAgent::RreqAction::kRecordOnly);
  CHECK(net.unicasts == before + 1);  // a second RREP copy
  CHECK(ag[3]->table().find(0)->paths.size() == 2);
}

TEST_CASE("aomdv: orphan RREP is discarded") {
  FakeNet net(line(3));
  auto ag = net.make_agents<AomdvAgent>();
  const RrepPacket rrep{0, 2, 1, 0, kNoNode};
  CHECK(ag[1]->process_rrep(rrep, 2) == AomdvAgent::RrepAction::kDiscard);
  CHECK(ag[1]->table().find(2) == nullptr);
}

TEST_CASE("aomdv: diamond discovery yields two disjoint paths and delivers") {
  FakeNet net(diamond());
  auto ag = net.make_agents<AomdvAgent>();
  ag[0]->send_data(net.packet(0, 3));
  CHECK(ag[0]->discovering(3));
  CHECK(ag[0]->pending(3) == 1);
  net.pump();
  const RouteEntry* e = ag[0]->table().find(3);
  REQUIRE(e != nullptr);
  CHECK(e->paths.size() == 2);
  CHECK(paths_disjoint(*e));
  CHECK(net.delivered.size() == 1);
  CHECK(net.rreqs.size() == 1);
  CHECK(net.ready.size() >= 1);
  CHECK_FALSE(has_next_hop_cycle({&ag[0]->table(), &ag[1]->table(), &ag[2]->table(), &ag[3]->table()}, 3));
}

TEST_CASE("aomdv: broken primary fails over without a new flood") {
  FakeNet net(diamond());
  auto ag = net.make_agents<AomdvAgent>();
  ag[0]->send_data(net.packet(0, 3));
  net.pump();
  const NodeId primary = *ag[0]->select_next_hop(3);
  net.cut(0, primary);
  ag[0]->send_data(net.packet(0, 3));
  net.pump();
  CHECK(net.delivered.size() == 2);
  CHECK(net.rreqs.size() == 1);
  CHECK(ag[0]->table().find(3)->paths.size() == 1);
  CHECK(ag[0]->select_next_hop(3) != primary);
}

TEST_CASE("aomdv: unreachable destination retries then reports no_route") {
  FakeNet net({{}, {}});
  auto ag = net.make_agents<AomdvAgent>();
  ag[0]->send_data(net.packet(0, 1));
  net.pump();
  while (net.fire_next_timer()) {
  }
  CHECK(net.rreqs.size() == 3);  // first try plus two retries
  REQUIRE(net.dropped.size() == 1);
  CHECK(net.dropped[0].why == DropReason::kNoRoute);
  CHECK(net.no_routes == std::vector<std::pair<NodeId, NodeId>>{{0, 1}});
  CHECK(net.now_ == SimTime::seconds(3));
}

TEST_CASE("aomdv: mid-route link break sends RERR upstream") {
  FakeNet net(line(4));
  auto ag = net.make_agents<AomdvAgent>();
  ag[0]->send_data(net.packet(0, 3));
  net.pump();
  REQUIRE(net.delivered.size() == 1);
  CHECK(ag[1]->table().find(3)->precursors.contains(0));
  net.cut(2, 3);
  ag[0]->send_data(net.packet(0, 3));
  net.pump();
  REQUIRE(net.dropped.size() == 1);
  CHECK(net.dropped[0].at == 2);
  CHECK(net.dropped[0].why == DropReason::kLinkBreak);
  // The RERR reached the origin, which invalidated its route.
  const RouteEntry* e = ag[0]->table().find(3);
  CHECK((e == nullptr || e->paths.empty()));
}

TEST_CASE("aomdv: killed node drops what it holds") {
  FakeNet net({{}, {}});
  auto ag = net.make_agents<AomdvAgent>();
  ag[0]->send_data(net.packet(0, 1));
  ag[0]->on_killed();
  REQUIRE(net.dropped.size() == 1);
  CHECK(net.dropped[0].why == DropReason::kNodeDown);
  CHECK_FALSE(net.fire_next_timer());
}

TEST_CASE("aomdv: static routes outrank discovered ones") {
  FakeNet net(diamond());
  auto ag = net.make_agents<AomdvAgent>();
  ag[0]->send_data(net.packet(0, 3));
  net.pump();
  ag[0]->add_static_route(3, 2, 5);
  CHECK(ag[0]->select_next_hop(3) == 2);
}

TEST_CASE("dsr: first reply wins and data follows the source route") {
  FakeNet net(diamond());
  auto ag = net.make_agents<DsrAgent>();
  ag[0]->send_data(net.packet(0, 3));
  net.pump();
  const auto* r = ag[0]->cached_route(3);
  REQUIRE(r != nullptr);
  CHECK(r->size() == 3);
  CHECK(r->front() == 0);
  CHECK(r->back() == 3);
  CHECK(net.delivered.size() == 1);
  CHECK(net.rreqs.size() == 1);
}

TEST_CASE("dsr: forwarding checks the holder's position") {
  FakeNet net(line(3));
  auto ag = net.make_agents<DsrAgent>();
  const DataPacket p = net.packet(0, 2);
  CHECK(ag[1]->dsr_forward(DsrData{p, {0, 1, 2}, 1}) == DsrAgent::ForwardResult::kForwarded);
  CHECK(ag[2]->dsr_forward(DsrData{p, {0, 1, 2}, 2}) == DsrAgent::ForwardResult::kDelivered);
  CHECK(ag[2]->dsr_forward(DsrData{p, {0, 1, 2}, 1}) == DsrAgent::ForwardResult::kNotOnRoute);
}

TEST_CASE("dsr: a broken route drops the packet, tells the origin, and rediscovers on next send") {
  FakeNet net(line(4));
  auto ag = net.make_agents<DsrAgent>();
  ag[0]->send_data(net.packet(0, 3));
  net.pump();
  REQUIRE(net.delivered.size() == 1);
  net.cut(2, 3);
  ag[0]->send_data(net.packet(0, 3));
  net.pump();
  REQUIRE(net.dropped.size() == 1);
  CHECK(net.dropped[0].why == DropReason::kLinkBreak);
  CHECK(ag[0]->cached_route(3) == nullptr);  // error travelled back along the route
  ag[0]->send_data(net.packet(0, 3));
  net.pump();
  CHECK(net.rreqs.size() == 2);
}

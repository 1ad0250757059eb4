#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "wsnsim/energy.hpp"
#include "wsnsim/packets.hpp"
#include "wsnsim/sim_core.hpp"

namespace wsnsim {

enum class DropReason : std::uint8_t { kNoRoute, kLinkBreak, kNodeDown, kNotOnRoute };
const char* to_string(DropReason r);

/// Administrative distance per route source: lower wins.
struct AdTable {
  int static_routes = 0;
  int aomdv = 1;
  int dsr = 2;
};

struct RoutingParams {
  SimTime reply_wait = SimTime::seconds(1);
  int rreq_retries = 2;
  SimTime route_expiry = SimTime::seconds(10);
  int link_fail_threshold = 2;  // consecutive failed unicasts before a link counts as broken
  AdTable ad;
  Picojoules per_hop_cost = 0;  // TX + RX energy of one max-size data frame
};

/// Services the simulation provides to a per-node routing agent.
class RoutingHost {
 public:
  virtual ~RoutingHost() = default;
  virtual SimTime now() const = 0;
  virtual void unicast(NodeId from, NodeId to, Frame frame) = 0;
  virtual void broadcast(NodeId from, Frame frame) = 0;
  virtual EventId schedule_timer(NodeId node, SimTime delay, std::function<void()> fn) = 0;
  virtual void cancel_timer(EventId id) = 0;

  virtual void deliver(NodeId at, const DataPacket& p) = 0;
  virtual void drop(NodeId at, const DataPacket& p, DropReason why) = 0;
  virtual void neighbor_seen(NodeId node, NodeId neighbor) = 0;
  virtual void route_changed(NodeId node, NodeId destination) = 0;
  virtual void advertised(NodeId node, NodeId destination, SeqNo seq, std::uint32_t hops) = 0;
  virtual void rreq_originated(NodeId origin, NodeId destination) = 0;
  virtual void rreq_rebroadcast(NodeId node, RreqId id) = 0;
  virtual void no_route(NodeId origin, NodeId destination) = 0;
  /// The origin obtained a route after a discovery.
  virtual void route_ready(NodeId origin, NodeId destination) = 0;
  virtual void trace(NodeId node, std::string_view event, const std::string& detail) = 0;
};

class RoutingAgent {
 public:
  virtual ~RoutingAgent() = default;
  /// Application send request at this node (which is the packet's origin).
  virtual void send_data(const DataPacket& p) = 0;
  virtual void receive(const Frame& frame) = 0;
  virtual void tx_status(const Frame& frame, bool delivered) = 0;
  /// Node failure: drop everything held locally.
  virtual void on_killed() = 0;
};

struct RouteCandidate {
  int ad = 0;
  std::uint32_t hop_count = 0;
  Picojoules energy_cost = 0;
  NodeId next_hop = kNoNode;
};

/// Lowest AD class first, then minimal (hop_count, energy_cost, next_hop).
std::optional<NodeId> select_route(std::span<const RouteCandidate> candidates);

// ----------------------------------------------------------------- AOMDV

struct PathRecord {
  NodeId next_hop = kNoNode;
  NodeId last_hop = kNoNode;
  std::uint32_t hop_count = 0;
  Picojoules energy_cost = 0;
};

struct RouteEntry {
  NodeId destination = kNoNode;
  SeqNo seq = 0;
  std::optional<std::uint32_t> advertised_hop_count;  // fixed per (destination, seq) once advertised
  std::vector<PathRecord> paths;
  std::set<NodeId> precursors;
  SimTime expiry;

  std::uint32_t max_hop_count() const;
};

/// AOMDV multipath table. Paths per destination share one sequence number
/// and are link-disjoint (distinct next hops and distinct last hops).
class RouteTable {
 public:
  explicit RouteTable(NodeId self) : self_(self) {}

  /// Accepts the path iff the offered seq is newer (entry resets), or equal
  /// with hop_count strictly below this node's advertised hop count and
  /// both next_hop and last_hop unused by the stored paths.
  bool insert_path(NodeId destination, SeqNo seq, NodeId next_hop, NodeId last_hop, std::uint32_t hop_count,
                   Picojoules energy_cost, SimTime expiry);

  /// Fixes the advertised hop count at the current maximum if unset and
  /// returns it. Requires at least one path.
  std::uint32_t advertise(NodeId destination);

  struct Invalidated {
    NodeId destination;
    SeqNo seq;
    std::set<NodeId> precursors;
  };
  /// Removes every path through `next_hop` (restricted to `only` when given).
  /// Entries left without paths are invalidated; `bump_seq` increments their
  /// seq, otherwise seq is raised to at least the supplied value.
  std::vector<Invalidated> remove_next_hop(NodeId next_hop, const std::map<NodeId, SeqNo>* only, bool bump_seq,
                                           std::vector<NodeId>* touched);

  /// Drops all paths of entries whose expiry passed; seq and advertised hop
  /// count are kept. Returns the affected destinations.
  std::vector<NodeId> purge_expired(SimTime now);

  RouteEntry* find(NodeId destination);
  const RouteEntry* find(NodeId destination) const;
  const std::map<NodeId, RouteEntry>& entries() const { return entries_; }
  NodeId self() const { return self_; }

 private:
  NodeId self_;
  std::map<NodeId, RouteEntry> entries_;
};

class AomdvAgent final : public RoutingAgent {
 public:
  enum class RreqAction { kReply, kForward, kRecordOnly, kDiscard };
  enum class RrepAction { kAcceptForward, kAcceptTerminal, kDiscard };

  AomdvAgent(NodeId self, RoutingHost& host, RoutingParams params);

  void send_data(const DataPacket& p) override;
  void receive(const Frame& frame) override;
  void tx_status(const Frame& frame, bool delivered) override;
  void on_killed() override;

  RreqId originate_rreq(NodeId destination);
  RreqAction process_rreq(const RreqPacket& rreq, NodeId previous_hop);
  RrepAction process_rrep(const RrepPacket& rrep, NodeId previous_hop);
  void process_rerr(const RerrPacket& rerr, NodeId previous_hop);
  void handle_link_break(NodeId dead_neighbor);
  std::optional<NodeId> select_next_hop(NodeId destination);

  void add_static_route(NodeId destination, NodeId next_hop, std::uint32_t hop_count);

  NodeId id() const { return self_; }
  SeqNo own_seq() const { return own_seq_; }
  const RouteTable& table() const { return table_; }
  bool discovering(NodeId destination) const { return discovery_.contains(destination); }
  std::size_t pending(NodeId destination) const;

 private:
  struct Discovery {
    int retries_left = 0;
    EventId timer = 0;
  };
  struct SeenRreq {
    std::set<NodeId> first_hops;
    std::optional<SeqNo> replied_seq;
  };

  void route_or_queue(const DataPacket& p, NodeId previous_hop);
  void forward_data(const DataPacket& p, NodeId next_hop);
  void start_discovery(NodeId destination);
  void on_reply_timeout(NodeId destination);
  void flush(NodeId destination);
  void send_rrep(const RrepPacket& rrep, NodeId next_hop);
  void send_rerr(NodeId to, std::vector<UnreachableDest> list);
  void purge();
  Picojoules cost(std::uint32_t hops) const { return params_.per_hop_cost * hops; }
  void mutated(NodeId destination);

  NodeId self_;
  RoutingHost& host_;
  RoutingParams params_;
  RouteTable table_;
  std::map<NodeId, PathRecord> static_routes_;
  SeqNo own_seq_ = 0;
  std::uint32_t next_broadcast_id_ = 0;
  std::map<RreqId, SeenRreq> seen_;
  std::map<std::tuple<NodeId, NodeId, SeqNo>, std::set<NodeId>> rrep_reverse_used_;
  std::map<NodeId, std::vector<DataPacket>> pending_;
  std::map<NodeId, Discovery> discovery_;
  std::map<NodeId, int> fail_count_;
  bool dead_ = false;
};

// ------------------------------------------------------------------- DSR

class DsrAgent final : public RoutingAgent {
 public:
  enum class ForwardResult { kDelivered, kForwarded, kNotOnRoute };

  DsrAgent(NodeId self, RoutingHost& host, RoutingParams params);

  void send_data(const DataPacket& p) override;
  void receive(const Frame& frame) override;
  void tx_status(const Frame& frame, bool delivered) override;
  void on_killed() override;

  /// Floods a request for `destination`; the first reply is cached.
  void dsr_discover(NodeId destination);
  ForwardResult dsr_forward(const DsrData& data);

  const std::vector<NodeId>* cached_route(NodeId destination) const;
  const std::map<NodeId, std::vector<NodeId>>& cache() const { return cache_; }
  NodeId id() const { return self_; }

 private:
  struct Discovery {
    int retries_left = 0;
    EventId timer = 0;
  };

  void on_request(const DsrRreq& req, NodeId previous_hop);
  void on_reply(const DsrRrep& rep, NodeId previous_hop);
  void on_error(const DsrRerr& err);
  void on_reply_timeout(NodeId destination);
  void send_along(const DataPacket& p, const std::vector<NodeId>& route);
  void invalidate_link(NodeId from, NodeId to);

  NodeId self_;
  RoutingHost& host_;
  RoutingParams params_;
  std::map<NodeId, std::vector<NodeId>> cache_;
  std::set<std::pair<NodeId, std::uint32_t>> seen_;
  std::uint32_t next_request_id_ = 0;
  std::map<NodeId, std::vector<DataPacket>> pending_;
  std::map<NodeId, Discovery> discovery_;
  std::map<NodeId, int> fail_count_;
  bool dead_ = false;
};

/// Directed next-hop graph for one destination has a cycle.
bool has_next_hop_cycle(const std::vector<const RouteTable*>& tables, NodeId destination);

/// Every entry's paths have pairwise distinct next hops and last hops.
bool paths_disjoint(const RouteEntry& entry);

}  // namespace wsnsim

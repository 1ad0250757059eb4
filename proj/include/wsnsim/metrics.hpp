#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wsnsim/discovery.hpp"
#include "wsnsim/energy.hpp"
#include "wsnsim/packets.hpp"
#include "wsnsim/routing.hpp"

namespace wsnsim {

enum class PacketStatus : std::uint8_t { kInFlight, kDelivered, kDropped };

struct PacketRecord {
  DataPacket packet;
  PacketStatus status = PacketStatus::kInFlight;
  SimTime finished_at;  // delivery or drop time
  std::uint32_t hops = 0;
  DropReason reason = DropReason::kNoRoute;
  NodeId dropped_at = kNoNode;
};

/// Every data packet ever created and its final status. A packet settles at
/// most once; a second delivery or drop throws std::logic_error.
class PacketBook {
 public:
  DataPacket create(NodeId origin, NodeId destination, SimTime at, std::uint32_t payload_bits);
  void deliver(const DataPacket& p, SimTime at);
  void drop(const DataPacket& p, NodeId at, DropReason why, SimTime when);

  const std::vector<PacketRecord>& records() const { return records_; }
  std::size_t sent() const { return records_.size(); }
  std::size_t delivered() const { return delivered_; }
  std::size_t dropped() const { return dropped_; }
  std::size_t in_flight() const { return records_.size() - delivered_ - dropped_; }

 private:
  PacketRecord& settle(const DataPacket& p);

  std::vector<PacketRecord> records_;
  std::size_t delivered_ = 0;
  std::size_t dropped_ = 0;
};

struct TraceLine {
  SimTime at;
  std::string text;
};

struct ControlCounts {
  std::uint64_t rreq_originated = 0;
  std::uint64_t rreq_forwarded = 0;
  std::uint64_t rrep = 0;
  std::uint64_t rerr = 0;
  std::uint64_t wakeup = 0;
  std::uint64_t hello = 0;
};

/// Everything a finished run leaves behind. Metrics are a pure function of it.
struct RunTrace {
  std::size_t nodes = 0;
  SimTime run_length;
  std::vector<TraceLine> lines;  // filled only when tracing was requested
  PacketBook packets;
  std::vector<NodeEnergy> energy;
  std::vector<std::vector<StateSegment>> states;
  NeighborLedger ledger{0};
  std::set<std::pair<NodeId, NodeId>> true_pairs;  // ordered, union over the run
  std::uint64_t frames_sent = 0;
  std::uint64_t collisions = 0;  // intended receivers that lost a frame to overlap
  ControlCounts control;
  std::array<std::uint64_t, kFrameKindCount> frames_by_kind{};
  std::uint64_t events = 0;
  std::uint64_t route_mutations = 0;
  std::uint64_t invariant_checks = 0;
  std::vector<bool> transmitted;  // node ever put a frame on the air
  std::vector<bool> woken;        // node ever woke for an I-SLOT
  std::vector<std::optional<SimTime>> died_at;
  std::vector<std::pair<SimTime, NodeId>> rreq_originations;
  std::vector<std::pair<NodeId, NodeId>> no_route;  // (origin, destination) after retries ran out
  std::vector<std::tuple<SimTime, NodeId, NodeId>> route_ready;  // (time, origin, destination)
  std::vector<RouteTable> final_tables;             // AOMDV only, index = node
  std::vector<std::map<NodeId, std::vector<NodeId>>> final_source_routes;  // DSR only
};

struct NodeReport {
  NodeId node = 0;
  std::array<double, kRadioStateCount> seconds{};
  std::array<double, kRadioStateCount> joules{};
  double total_joules = 0.0;
  double awake_fraction = 0.0;
  std::size_t neighbors_discovered = 0;
};

struct MetricsReport {
  std::optional<double> pdr;  // null when nothing was sent
  std::size_t sent = 0;
  std::size_t delivered = 0;
  std::size_t dropped = 0;
  std::size_t in_flight = 0;
  double throughput_bps = 0.0;
  std::optional<double> mean_delay_s;
  std::optional<double> p95_delay_s;
  double error_rate = 0.0;
  double discovery_rate = 0.0;  // first discoveries per simulated second
  std::optional<double> discovery_completeness;
  ControlCounts control;
  std::uint64_t frames_sent = 0;
  std::uint64_t collisions = 0;
  double total_joules = 0.0;
  std::optional<double> energy_per_delivered_bit;
  double run_seconds = 0.0;
  std::vector<NodeReport> per_node;
};

MetricsReport compute_metrics(const RunTrace& trace);

/// Mean end-to-end delay over delivered packets created at or after `since`.
std::optional<double> mean_delay_since(const RunTrace& trace, SimTime since);

/// Named scalar metrics in a fixed order; used for sweep aggregates and CSV.
std::vector<std::pair<std::string, std::optional<double>>> scalar_metrics(const MetricsReport& r);

}  // namespace wsnsim

#include "wsnsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wsnsim {

DataPacket PacketBook::create(NodeId origin, NodeId destination, SimTime at, std::uint32_t payload_bits) {
  DataPacket p;
  p.id = records_.size();
  p.origin = origin;
  p.destination = destination;
  p.created_at = at;
  p.payload_bits = payload_bits;
  records_.push_back({p});
  return p;
}

PacketRecord& PacketBook::settle(const DataPacket& p) {
  if (p.id >= records_.size()) throw std::logic_error("unknown packet " + std::to_string(p.id));
  PacketRecord& r = records_[p.id];
  if (r.status != PacketStatus::kInFlight)
    throw std::logic_error("packet " + std::to_string(p.id) + " settled twice");
  return r;
}

void PacketBook::deliver(const DataPacket& p, SimTime at) {
  PacketRecord& r = settle(p);
  r.status = PacketStatus::kDelivered;
  r.finished_at = at;
  r.hops = p.hops;
  ++delivered_;
}

void PacketBook::drop(const DataPacket& p, NodeId at, DropReason why, SimTime when) {
  PacketRecord& r = settle(p);
  r.status = PacketStatus::kDropped;
  r.finished_at = when;
  r.hops = p.hops;
  r.reason = why;
  r.dropped_at = at;
  ++dropped_;
}

namespace {

// Nearest-rank percentile.
double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace

std::optional<double> mean_delay_since(const RunTrace& trace, SimTime since) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& r : trace.packets.records()) {
    if (r.status != PacketStatus::kDelivered || r.packet.created_at < since) continue;
    sum += (r.finished_at - r.packet.created_at).to_seconds();
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

MetricsReport compute_metrics(const RunTrace& t) {
  MetricsReport m;
  const auto& book = t.packets;
  m.sent = book.sent();
  m.delivered = book.delivered();
  m.dropped = book.dropped();
  m.in_flight = book.in_flight();
  m.run_seconds = t.run_length.to_seconds();
  if (m.sent > 0) m.pdr = static_cast<double>(m.delivered) / static_cast<double>(m.sent);

  std::vector<double> delays;
  std::uint64_t delivered_bits = 0;
  std::uint64_t routing_drops = 0;
  for (const auto& r : book.records()) {
    if (r.status == PacketStatus::kDelivered) {
      delays.push_back((r.finished_at - r.packet.created_at).to_seconds());
      delivered_bits += r.packet.payload_bits;
    } else if (r.status == PacketStatus::kDropped) {
      // Packets that never left their origin for want of a route count
      // against delivery only.
      const bool never_sent = r.reason == DropReason::kNoRoute && r.dropped_at == r.packet.origin;
      if (!never_sent) ++routing_drops;
    }
  }
  if (m.run_seconds > 0) m.throughput_bps = static_cast<double>(delivered_bits) / m.run_seconds;
  if (!delays.empty()) {
    double sum = 0;
    for (double d : delays) sum += d;
    m.mean_delay_s = sum / static_cast<double>(delays.size());
    m.p95_delay_s = percentile(delays, 0.95);
  }

  m.frames_sent = t.frames_sent;
  m.collisions = t.collisions;
  if (t.frames_sent > 0)
    m.error_rate = static_cast<double>(t.collisions + routing_drops) / static_cast<double>(t.frames_sent);

  if (m.run_seconds > 0) m.discovery_rate = static_cast<double>(t.ledger.total_discoveries()) / m.run_seconds;
  if (!t.true_pairs.empty()) {
    std::size_t hit = 0;
    for (const auto& [a, b] : t.true_pairs)
      if (t.ledger.knows(a, b)) ++hit;
    m.discovery_completeness = static_cast<double>(hit) / static_cast<double>(t.true_pairs.size());
  }
  m.control = t.control;

  Picojoules total = 0;
  for (std::size_t i = 0; i < t.energy.size(); ++i) {
    const NodeEnergy& e = t.energy[i];
    NodeReport nr;
    nr.node = static_cast<NodeId>(i);
    for (std::size_t s = 0; s < kRadioStateCount; ++s) {
      nr.seconds[s] = e.duration[s].to_seconds();
      nr.joules[s] = pj_to_joules(e.energy[s]);
    }
    nr.total_joules = pj_to_joules(e.total);
    if (t.run_length > SimTime{})
      nr.awake_fraction = static_cast<double>(e.awake().us()) / static_cast<double>(t.run_length.us());
    if (i < t.ledger.size()) nr.neighbors_discovered = t.ledger.known(nr.node).size();
    total += e.total;
    m.per_node.push_back(nr);
  }
  m.total_joules = pj_to_joules(total);
  if (delivered_bits > 0) m.energy_per_delivered_bit = m.total_joules / static_cast<double>(delivered_bits);
  return m;
}

std::vector<std::pair<std::string, std::optional<double>>> scalar_metrics(const MetricsReport& r) {
  auto d = [](auto v) { return std::optional<double>(static_cast<double>(v)); };
  return {
      {"pdr", r.pdr},
      {"sent", d(r.sent)},
      {"delivered", d(r.delivered)},
      {"dropped", d(r.dropped)},
      {"in_flight", d(r.in_flight)},
      {"throughput_bps", d(r.throughput_bps)},
      {"mean_delay_s", r.mean_delay_s},
      {"p95_delay_s", r.p95_delay_s},
      {"error_rate", d(r.error_rate)},
      {"discovery_rate", d(r.discovery_rate)},
      {"discovery_completeness", r.discovery_completeness},
      {"frames_sent", d(r.frames_sent)},
      {"collisions", d(r.collisions)},
      {"rreq_originated", d(r.control.rreq_originated)},
      {"rreq_forwarded", d(r.control.rreq_forwarded)},
      {"rrep", d(r.control.rrep)},
      {"rerr", d(r.control.rerr)},
      {"wakeup", d(r.control.wakeup)},
      {"hello", d(r.control.hello)},
      {"total_joules", d(r.total_joules)},
      {"energy_per_delivered_bit", r.energy_per_delivered_bit},
  };
}

}  // namespace wsnsim

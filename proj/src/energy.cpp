#include "wsnsim/energy.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace wsnsim {

const char* to_string(RadioState s) {
  switch (s) {
    case RadioState::kTx: return "TX";
    case RadioState::kRx: return "RX";
    case RadioState::kListen: return "LISTEN";
    case RadioState::kSleep: return "SLEEP";
  }
  return "?";
}

std::int64_t PowerProfile::power_uw(RadioState s) const {
  switch (s) {
    case RadioState::kTx: return tx_uw;
    case RadioState::kRx: return rx_uw;
    case RadioState::kListen: return listen_uw;
    case RadioState::kSleep: return sleep_uw;
  }
  return 0;
}

void PowerProfile::validate() const {
  if (tx_uw < 0 || rx_uw < 0 || listen_uw < 0 || sleep_uw < 0)
    throw std::invalid_argument("power values must be non-negative");
  if (!(sleep_uw < listen_uw)) throw std::invalid_argument("sleep power must be below listen power");
}

EnergyLedger::EnergyLedger(std::size_t nodes, PowerProfile profile)
    : profile_(profile), nodes_(nodes), cursor_(nodes) {}

void EnergyLedger::accrue_state(NodeId node, RadioState state, SimTime start, SimTime end) {
  const auto i = static_cast<std::size_t>(node);
  if (i >= nodes_.size()) throw std::out_of_range("unknown node " + std::to_string(node));
  if (end < start) throw std::logic_error("negative accrual interval");
  if (start < cursor_[i]) {
    throw std::logic_error("overlapping energy interval on node " + std::to_string(node) + " at " +
                           format_seconds_fixed(start));
  }
  const SimTime d = end - start;
  auto& n = nodes_[i];
  const auto k = static_cast<std::size_t>(state);
  const Picojoules e = profile_.power_uw(state) * d.us();
  n.duration[k] += d;
  n.energy[k] += e;
  n.total += e;
  cursor_[i] = end;
}

void EnergyLedger::accrue_state(NodeId node, RadioState state, SimTime duration) {
  const auto i = static_cast<std::size_t>(node);
  if (i >= nodes_.size()) throw std::out_of_range("unknown node " + std::to_string(node));
  accrue_state(node, state, cursor_[i], cursor_[i] + duration);
}

void EnergyLedger::finalize(SimTime run_length) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    SimTime sum;
    for (auto d : nodes_[i].duration) sum += d;
    if (sum != run_length) {
      throw std::logic_error("state durations of node " + std::to_string(i) + " sum to " + format_seconds(sum) +
                             " s, run length is " + format_seconds(run_length) + " s");
    }
  }
}

Picojoules EnergyLedger::network_total() const {
  Picojoules sum = 0;
  for (const auto& n : nodes_) sum += n.total;
  return sum;
}

std::vector<StateSegment> RadioTimeline::segments(SimTime run_end) const {
  struct Edge {
    SimTime at;
    int kind;  // 0 tx, 1 rx, 2 awake
    int delta;
  };
  std::vector<Edge> edges;
  edges.reserve(2 * (awake_.size() + tx_.size() + rx_.size()));
  auto push = [&](const std::vector<Span>& v, int kind) {
    for (const auto& s : v) {
      const SimTime a = std::max(s.start, SimTime{});
      const SimTime b = std::min(s.end, run_end);
      if (a >= b) continue;
      edges.push_back({a, kind, +1});
      edges.push_back({b, kind, -1});
    }
  };
  push(tx_, 0);
  push(rx_, 1);
  push(awake_, 2);
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.at < y.at; });

  std::vector<StateSegment> out;
  auto emit = [&](SimTime a, SimTime b, RadioState s) {
    if (a >= b) return;
    if (!out.empty() && out.back().state == s && out.back().end == a) {
      out.back().end = b;
    } else {
      out.push_back({a, b, s});
    }
  };
  int count[3] = {0, 0, 0};
  SimTime cursor;
  std::size_t i = 0;
  while (i < edges.size()) {
    const SimTime at = edges[i].at;
    const RadioState s = count[0] > 0   ? RadioState::kTx
                         : count[1] > 0 ? RadioState::kRx
                         : count[2] > 0 ? RadioState::kListen
                                        : RadioState::kSleep;
    emit(cursor, at, s);
    cursor = at;
    for (; i < edges.size() && edges[i].at == at; ++i) count[edges[i].kind] += edges[i].delta;
  }
  emit(cursor, run_end, RadioState::kSleep);
  return out;
}

RadioState state_at(const std::vector<StateSegment>& segments, SimTime t) {
  auto it = std::upper_bound(segments.begin(), segments.end(), t,
                             [](SimTime v, const StateSegment& s) { return v < s.end; });
  if (it == segments.end() || t < it->start) return RadioState::kSleep;
  return it->state;
}

}  // namespace wsnsim

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "wsnsim/sim_core.hpp"
#include "wsnsim/time.hpp"

namespace wsnsim {

/// Reduced non-negative fraction.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction make(std::int64_t num, std::int64_t den);
  Fraction operator+(const Fraction& o) const;
  Fraction operator-(const Fraction& o) const;
  bool operator==(const Fraction&) const = default;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Prime wake schedule: awake at slot t iff (t - offset) mod p == 0 for some
/// p in primes (Euclidean modulo, so slots before the offset follow the same
/// residue classes).
struct DiscoSchedule {
  NodeId node = 0;
  std::vector<std::int64_t> primes;
  std::int64_t offset = 0;

  /// Throws std::invalid_argument for empty, non-prime or repeated primes,
  /// or a negative offset.
  void validate() const;
};

bool is_prime(std::int64_t n);

bool disco_awake(const DiscoSchedule& s, std::int64_t slot);

struct DutyCycle {
  Fraction exact;    // awake slots per period lcm(primes)
  Fraction nominal;  // sum of 1/p
};

/// Exact awake fraction by inclusion-exclusion over the prime set, alongside
/// the nominal sum of reciprocals.
DutyCycle disco_duty_cycle(const DiscoSchedule& s);

/// First slot in [0, horizon) at which both schedules are awake, solved per
/// prime pair with the Chinese remainder theorem.
std::optional<std::int64_t> disco_first_meeting(const DiscoSchedule& a, const DiscoSchedule& b,
                                                std::int64_t horizon);

/// Default prime assignment: {3,5}, {5,7}, {7,11} rotating by node id, offset
/// = id mod smallest prime.
DiscoSchedule default_disco_schedule(NodeId node);

std::int64_t lcm_of_periods(const std::vector<DiscoSchedule>& schedules);

/// First time each node heard each neighbour. Entries are write-once.
class NeighborLedger {
 public:
  explicit NeighborLedger(std::size_t nodes) : known_(nodes) {}

  /// Returns true when this is the first discovery of `neighbor` by `node`.
  bool record(NodeId node, NodeId neighbor, SimTime t);
  bool knows(NodeId node, NodeId neighbor) const;
  std::optional<SimTime> first_discovery(NodeId node, NodeId neighbor) const;
  const std::map<NodeId, SimTime>& known(NodeId node) const { return known_.at(static_cast<std::size_t>(node)); }
  std::size_t size() const { return known_.size(); }
  std::size_t total_discoveries() const;

 private:
  std::vector<std::map<NodeId, SimTime>> known_;
};

using Adjacency = std::vector<std::vector<NodeId>>;  // sorted neighbour lists

struct HelloDiscovery {
  NodeId listener;
  NodeId talker;
  bool operator==(const HelloDiscovery&) const = default;
};

/// One randomized HELLO slot. Each node talks with probability `talk_prob`
/// (one uniform draw per node in id order); a listener discovers a talker iff
/// that talker is its only in-range talker this slot. `talkers` (if given)
/// receives the per-node talk decisions.
std::vector<HelloDiscovery> hello_slot(const Adjacency& adjacency, double talk_prob, RngStream& rng,
                                       std::vector<bool>* talkers = nullptr);

/// Complete graph on n nodes.
Adjacency clique(std::size_t n);

}  // namespace wsnsim

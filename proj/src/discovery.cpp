#include "wsnsim/discovery.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

namespace wsnsim {

Fraction Fraction::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  return g == 0 ? Fraction{0, 1} : Fraction{num / g, den / g};
}

Fraction Fraction::operator+(const Fraction& o) const {
  const std::int64_t l = std::lcm(den, o.den);
  return make(num * (l / den) + o.num * (l / o.den), l);
}

Fraction Fraction::operator-(const Fraction& o) const { return *this + Fraction{-o.num, o.den}; }

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void DiscoSchedule::validate() const {
  if (primes.empty()) throw std::invalid_argument("disco schedule needs at least one prime");
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (!is_prime(primes[i])) throw std::invalid_argument(std::to_string(primes[i]) + " is not prime");
    for (std::size_t j = 0; j < i; ++j)
      if (primes[i] == primes[j]) throw std::invalid_argument("repeated prime " + std::to_string(primes[i]));
  }
  if (offset < 0) throw std::invalid_argument("negative disco offset");
}

namespace {

std::int64_t emod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Returns (g, x, y) with a*x + b*y = g.
std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b) {
  if (b == 0) return {a, 1, 0};
  auto [g, x, y] = ext_gcd(b, a % b);
  return {g, y, x - (a / b) * y};
}

// Smallest t >= 0 with t = r1 (mod m1) and t = r2 (mod m2), if any.
std::optional<std::int64_t> crt(std::int64_t r1, std::int64_t m1, std::int64_t r2, std::int64_t m2) {
  auto [g, x, y] = ext_gcd(m1, m2);
  (void)y;
  const std::int64_t diff = r2 - r1;
  if (diff % g != 0) return std::nullopt;
  const std::int64_t l = m1 / g * m2;
  const std::int64_t step = emod(diff / g * x, m2 / g);
  return emod(r1 + m1 * step, l);
}

}  // namespace

bool disco_awake(const DiscoSchedule& s, std::int64_t slot) {
  return std::any_of(s.primes.begin(), s.primes.end(), [&](std::int64_t p) { return emod(slot - s.offset, p) == 0; });
}

DutyCycle disco_duty_cycle(const DiscoSchedule& s) {
  s.validate();
  const std::size_t n = s.primes.size();
  if (n > 20) throw std::invalid_argument("too many primes for exact duty cycle");
  DutyCycle out{Fraction{0, 1}, Fraction{0, 1}};
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    std::int64_t l = 1;
    int bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1U << i)) {
        l = std::lcm(l, s.primes[i]);
        ++bits;
      }
    }
    // Every residue class shares the offset, so each intersection is one
    // class modulo the lcm.
    const Fraction term = Fraction::make(1, l);
    out.exact = (bits % 2 == 1) ? out.exact + term : out.exact - term;
  }
  for (auto p : s.primes) out.nominal = out.nominal + Fraction::make(1, p);
  return out;
}

std::optional<std::int64_t> disco_first_meeting(const DiscoSchedule& a, const DiscoSchedule& b,
                                                std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  std::optional<std::int64_t> best;
  for (auto p : a.primes) {
    for (auto q : b.primes) {
      auto t = crt(emod(a.offset, p), p, emod(b.offset, q), q);
      if (t && (!best || *t < *best)) best = t;
    }
  }
  if (best && *best < horizon) return best;
  return std::nullopt;
}

DiscoSchedule default_disco_schedule(NodeId node) {
  static const std::vector<std::int64_t> kSets[3] = {{3, 5}, {5, 7}, {7, 11}};
  DiscoSchedule s;
  s.node = node;
  s.primes = kSets[static_cast<std::size_t>(node) % 3];
  s.offset = node % s.primes.front();
  return s;
}

std::int64_t lcm_of_periods(const std::vector<DiscoSchedule>& schedules) {
  std::int64_t l = 1;
  for (const auto& s : schedules)
    for (auto p : s.primes) l = std::lcm(l, p);
  return l;
}

bool NeighborLedger::record(NodeId node, NodeId neighbor, SimTime t) {
  auto& m = known_.at(static_cast<std::size_t>(node));
  return m.emplace(neighbor, t).second;
}

bool NeighborLedger::knows(NodeId node, NodeId neighbor) const {
  return known_.at(static_cast<std::size_t>(node)).contains(neighbor);
}

std::optional<SimTime> NeighborLedger::first_discovery(NodeId node, NodeId neighbor) const {
  const auto& m = known_.at(static_cast<std::size_t>(node));
  auto it = m.find(neighbor);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::size_t NeighborLedger::total_discoveries() const {
  std::size_t n = 0;
  for (const auto& m : known_) n += m.size();
  return n;
}

std::vector<HelloDiscovery> hello_slot(const Adjacency& adjacency, double talk_prob, RngStream& rng,
                                       std::vector<bool>* talkers) {
  if (!(talk_prob >= 0.0 && talk_prob <= 1.0)) throw std::invalid_argument("talk_prob must lie in [0,1]");
  const std::size_t n = adjacency.size();
  std::vector<bool> talks(n);
  for (std::size_t i = 0; i < n; ++i) talks[i] = rng.uniform01() < talk_prob;

  std::vector<HelloDiscovery> out;
  for (std::size_t l = 0; l < n; ++l) {
    if (talks[l]) continue;
    NodeId only = kGlobalTarget;
    int count = 0;
    for (NodeId nb : adjacency[l]) {
      if (talks[static_cast<std::size_t>(nb)]) {
        only = nb;
        if (++count > 1) break;
      }
    }
    if (count == 1) out.push_back({static_cast<NodeId>(l), only});
  }
  if (talkers) *talkers = std::move(talks);
  return out;
}

Adjacency clique(std::size_t n) {
  Adjacency adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) adj[i].push_back(static_cast<NodeId>(j));
  return adj;
}

}  // namespace wsnsim

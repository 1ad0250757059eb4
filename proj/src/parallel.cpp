#include "wsnsim/parallel.hpp"

#include <algorithm>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wsnsim/discovery.hpp"

namespace wsnsim {

int parallel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

ScenarioConfig with_seed(const ScenarioConfig& cfg, std::uint64_t seed) {
  ScenarioConfig c = cfg;
  c.seed = seed;
  return c;
}

std::vector<RunOutput> collect(std::vector<std::optional<RunOutput>>& slots, std::vector<std::exception_ptr>& errors) {
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<RunOutput> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<std::int64_t> primes_upto(std::int64_t max_prime) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p <= max_prime; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> prime_pairs(std::int64_t max_prime) {
  const auto ps = primes_upto(max_prime);
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (auto p : ps)
    for (auto q : ps)
      if (p != q) out.emplace_back(p, q);
  return out;
}

MeetingBoundResult check_pair(std::int64_t p, std::int64_t q) {
  MeetingBoundResult r;
  const std::int64_t pq = p * q;
  for (std::int64_t a = 0; a < pq; ++a) {
    for (std::int64_t b = 0; b < pq; ++b) {
      ++r.cases;
      const DiscoSchedule sa{0, {p}, a};
      const DiscoSchedule sb{1, {q}, b};
      const std::int64_t horizon = pq + std::max(a, b);
      std::optional<std::int64_t> scanned;
      for (std::int64_t t = 0; t < horizon; ++t) {
        if (disco_awake(sa, t) && disco_awake(sb, t)) {
          scanned = t;
          break;
        }
      }
      if (!scanned) ++r.bound_violations;
      if (disco_first_meeting(sa, sb, horizon) != scanned) ++r.solver_mismatches;
    }
  }
  return r;
}

constexpr std::uint64_t kHelloChunks = 64;

std::uint64_t hello_chunk(std::size_t n, double p, std::uint64_t slots, std::uint64_t seed, std::uint64_t chunk) {
  const std::uint64_t begin = slots * chunk / kHelloChunks;
  const std::uint64_t end = slots * (chunk + 1) / kHelloChunks;
  RngStream rng(seed, "hello/" + std::to_string(chunk));
  const Adjacency adj = clique(n);
  std::uint64_t total = 0;
  for (std::uint64_t s = begin; s < end; ++s) total += hello_slot(adj, p, rng).size();
  return total;
}

}  // namespace

std::vector<RunOutput> sweep_serial(const ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds,
                                    const RunOptions& options) {
  std::vector<RunOutput> out;
  out.reserve(seeds.size());
  for (auto s : seeds) out.push_back(run_scenario(with_seed(cfg, s), options));
  return out;
}

std::vector<RunOutput> sweep_parallel(const ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds,
                                      const RunOptions& options) {
  const auto n = static_cast<std::int64_t>(seeds.size());
  std::vector<std::optional<RunOutput>> slots(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      slots[k] = run_scenario(with_seed(cfg, seeds[k]), options);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  return collect(slots, errors);
}

MeetingBoundResult meeting_bound_serial(std::int64_t max_prime) {
  MeetingBoundResult total;
  for (auto [p, q] : prime_pairs(max_prime)) {
    const auto r = check_pair(p, q);
    total.cases += r.cases;
    total.bound_violations += r.bound_violations;
    total.solver_mismatches += r.solver_mismatches;
  }
  return total;
}

MeetingBoundResult meeting_bound_parallel(std::int64_t max_prime) {
  const auto pairs = prime_pairs(max_prime);
  std::vector<MeetingBoundResult> parts(pairs.size());
  const auto n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    parts[k] = check_pair(pairs[k].first, pairs[k].second);
  }
  MeetingBoundResult total;
  for (const auto& r : parts) {
    total.cases += r.cases;
    total.bound_violations += r.bound_violations;
    total.solver_mismatches += r.solver_mismatches;
  }
  return total;
}

std::uint64_t hello_discoveries_serial(std::size_t n, double talk_prob, std::uint64_t slots, std::uint64_t seed) {
  std::uint64_t total = 0;
  for (std::uint64_t c = 0; c < kHelloChunks; ++c) total += hello_chunk(n, talk_prob, slots, seed, c);
  return total;
}

std::uint64_t hello_discoveries_parallel(std::size_t n, double talk_prob, std::uint64_t slots, std::uint64_t seed) {
  std::uint64_t total = 0;
  const auto chunks = static_cast<std::int64_t>(kHelloChunks);
#pragma omp parallel for reduction(+ : total) schedule(static)
  for (std::int64_t c = 0; c < chunks; ++c) total += hello_chunk(n, talk_prob, slots, seed, static_cast<std::uint64_t>(c));
  return total;
}

}  // namespace wsnsim

#pragma once

#include <cstdint>
#include <vector>

#include "wsnsim/network.hpp"

namespace wsnsim {

// Each kernel has a serial reference and an OpenMP version. Both produce
// identical results for any thread count; the parallel form only changes
// which thread computes which independent piece.

/// One run per seed, returned in seed order. A failing run's exception is
/// rethrown (the lowest-indexed one when several fail).
std::vector<RunOutput> sweep_serial(const ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds,
                                    const RunOptions& options);
std::vector<RunOutput> sweep_parallel(const ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds,
                                      const RunOptions& options);

/// Exhaustive check that two single-prime schedules {p}, {q} (distinct primes
/// <= max_prime, offsets in [0, p*q)) share an awake slot below
/// p*q + max(offset), and that the CRT solver finds the same first slot as a
/// slot-by-slot scan.
struct MeetingBoundResult {
  std::uint64_t cases = 0;
  std::uint64_t bound_violations = 0;
  std::uint64_t solver_mismatches = 0;
  bool operator==(const MeetingBoundResult&) const = default;
};
MeetingBoundResult meeting_bound_serial(std::int64_t max_prime);
MeetingBoundResult meeting_bound_parallel(std::int64_t max_prime);

/// Total discoveries over `slots` HELLO slots in an n-clique. Slots are split
/// into fixed chunks, each drawing from its own named stream.
std::uint64_t hello_discoveries_serial(std::size_t n, double talk_prob, std::uint64_t slots, std::uint64_t seed);
std::uint64_t hello_discoveries_parallel(std::size_t n, double talk_prob, std::uint64_t slots, std::uint64_t seed);

/// Threads OpenMP would use for the parallel kernels (1 without OpenMP).
int parallel_threads();

}  // namespace wsnsim

#include "wsnsim/sim_core.hpp"

#include <stdexcept>

namespace wsnsim {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kSlotBoundary: return "slot";
    case EventKind::kFrameStart: return "frame_start";
    case EventKind::kFrameArrival: return "frame_arrival";
    case EventKind::kMobilityStep: return "mobility";
    case EventKind::kTimerExpiry: return "timer";
    case EventKind::kTrafficGeneration: return "traffic";
    case EventKind::kNodeFailure: return "failure";
  }
  return "?";
}

EventId Simulator::schedule(SimTime at, EventKind kind, NodeId target, Handler fn) {
  if (at < now_) {
    throw std::logic_error("event scheduled in the past: at=" + format_seconds_fixed(at) +
                           " now=" + format_seconds_fixed(now_));
  }
  const EventId id = next_id_++;
  queue_.push(Key{at, id});
  live_.emplace(id, Pending{EventRecord{id, at, kind, target}, std::move(fn)});
  return id;
}

bool Simulator::cancel(EventId id) { return live_.erase(id) > 0; }

std::size_t Simulator::run_until(SimTime t_end) {
  if (t_end < now_) throw std::logic_error("run_until into the past");
  std::size_t fired = 0;
  while (!queue_.empty() && queue_.top().at <= t_end) {
    const Key key = queue_.top();
    queue_.pop();
    auto it = live_.find(key.id);
    if (it == live_.end()) continue;  // cancelled
    Pending ev = std::move(it->second);
    live_.erase(it);
    now_ = key.at;
    if (observer_) observer_(ev.record);
    ++dispatched_;
    ++fired;
    ev.fn();
  }
  now_ = t_end;
  return fired;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t run_seed, std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return splitmix64(splitmix64(run_seed) ^ h);
}

RngStream::RngStream(std::uint64_t run_seed, std::string name)
    : name_(std::move(name)), gen_(derive_stream_seed(run_seed, name_)) {}

double RngStream::uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::int_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("int_below(0)");
  if (n == 1) {
    gen_();  // keep the draw index advancing uniformly
    return 0;
  }
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % n;
}

}  // namespace wsnsim

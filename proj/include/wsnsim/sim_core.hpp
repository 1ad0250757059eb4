#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "wsnsim/time.hpp"

namespace wsnsim {

using NodeId = std::int32_t;
inline constexpr NodeId kGlobalTarget = -1;

using EventId = std::uint64_t;

enum class EventKind : std::uint8_t {
  kSlotBoundary,
  kFrameStart,
  kFrameArrival,
  kMobilityStep,
  kTimerExpiry,
  kTrafficGeneration,
  kNodeFailure,
};

const char* to_string(EventKind kind);

struct EventRecord {
  EventId id = 0;
  SimTime fire_at;
  EventKind kind = EventKind::kTimerExpiry;
  NodeId target = kGlobalTarget;
};

/// Single-threaded discrete-event engine. Events fire in (fire_at, id) order;
/// ids are assigned in insertion order so simultaneous events fire FIFO.
class Simulator {
 public:
  using Handler = std::function<void()>;

  SimTime now() const { return now_; }

  /// Throws std::logic_error when `at` lies in the past.
  EventId schedule(SimTime at, EventKind kind, NodeId target, Handler fn);
  EventId schedule_in(SimTime delay, EventKind kind, NodeId target, Handler fn) {
    return schedule(now_ + delay, kind, target, std::move(fn));
  }

  /// True iff the event was pending. Cancelled events never fire.
  bool cancel(EventId id);

  /// Dispatches every event with fire_at <= t_end, then parks the clock at
  /// t_end. Returns the number of handlers run.
  std::size_t run_until(SimTime t_end);

  std::size_t pending() const { return live_.size(); }
  std::uint64_t dispatched() const { return dispatched_; }

  /// Called before each handler; used for tracing and invariant bookkeeping.
  void set_dispatch_observer(std::function<void(const EventRecord&)> obs) { observer_ = std::move(obs); }

 private:
  struct Key {
    SimTime at;
    EventId id;
    bool operator>(const Key& o) const { return at != o.at ? at > o.at : id > o.id; }
  };
  struct Pending {
    EventRecord record;
    Handler fn;
  };

  SimTime now_;
  EventId next_id_ = 0;
  std::uint64_t dispatched_ = 0;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> queue_;
  std::unordered_map<EventId, Pending> live_;
  std::function<void(const EventRecord&)> observer_;
};

/// Named reproducible random stream. The output depends only on
/// (run_seed, name, draw index): std::mt19937_64 is fully specified by the
/// standard and the conversions below avoid library-specific distributions.
class RngStream {
 public:
  RngStream(std::uint64_t run_seed, std::string name);

  const std::string& name() const { return name_; }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01();
  /// Uniform integer in [0, n). Throws std::invalid_argument for n == 0.
  std::uint64_t int_below(std::uint64_t n);

 private:
  std::string name_;
  std::mt19937_64 gen_;
};

std::uint64_t derive_stream_seed(std::uint64_t run_seed, std::string_view name);

}  // namespace wsnsim

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace wsnsim {

/// Simulated time in integer microseconds. All slot arithmetic is exact.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime micros(std::int64_t us) { return SimTime(us); }
  static constexpr SimTime millis(std::int64_t ms) { return SimTime(ms * 1000); }
  static constexpr SimTime seconds(std::int64_t s) { return SimTime(s * 1000000); }
  static constexpr SimTime max() { return SimTime(INT64_MAX / 4); }

  constexpr std::int64_t us() const { return us_; }
  constexpr double to_seconds() const { return static_cast<double>(us_) * 1e-6; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime o) const { return SimTime(us_ + o.us_); }
  constexpr SimTime operator-(SimTime o) const { return SimTime(us_ - o.us_); }
  constexpr SimTime& operator+=(SimTime o) {
    us_ += o.us_;
    return *this;
  }
  constexpr SimTime& operator-=(SimTime o) {
    us_ -= o.us_;
    return *this;
  }
  constexpr SimTime operator*(std::int64_t k) const { return SimTime(us_ * k); }

 private:
  constexpr explicit SimTime(std::int64_t us) : us_(us) {}
  std::int64_t us_ = 0;
};

/// Parses a non-negative decimal seconds literal ("1.25", "10s", "0.001")
/// into exact microseconds. Throws std::invalid_argument on malformed input
/// or when the value has sub-microsecond digits that are not zero.
SimTime parse_seconds(std::string_view text);

/// Formats as decimal seconds with trailing zeros trimmed ("1.25", "10").
std::string format_seconds(SimTime t);

/// Fixed 6-decimal rendering used by the trace so lines sort lexically per run.
std::string format_seconds_fixed(SimTime t);

}  // namespace wsnsim

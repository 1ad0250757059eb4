#include "wsnsim/time.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace wsnsim {

SimTime parse_seconds(std::string_view text) {
  std::string_view s = text;
  if (!s.empty() && s.back() == 's') s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("empty duration");

  std::int64_t whole = 0;
  std::int64_t frac = 0;
  int frac_digits = 0;
  bool seen_dot = false;
  bool any_digit = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("malformed duration '" + std::string(text) + "'");
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("malformed duration '" + std::string(text) + "'");
    any_digit = true;
    const int d = c - '0';
    if (!seen_dot) {
      if (whole > (INT64_MAX / 4) / 10'000'000) throw std::invalid_argument("duration out of range");
      whole = whole * 10 + d;
    } else if (frac_digits < 6) {
      frac = frac * 10 + d;
      ++frac_digits;
    } else if (d != 0) {
      throw std::invalid_argument("duration '" + std::string(text) + "' is finer than 1 us");
    }
  }
  if (!any_digit) throw std::invalid_argument("malformed duration '" + std::string(text) + "'");
  while (frac_digits < 6) {
    frac *= 10;
    ++frac_digits;
  }
  return SimTime::micros(whole * 1'000'000 + frac);
}

std::string format_seconds(SimTime t) {
  std::string out = format_seconds_fixed(t);
  while (!out.empty() && out.back() == '0') out.pop_back();
  if (!out.empty() && out.back() == '.') out.pop_back();
  return out;
}

std::string format_seconds_fixed(SimTime t) {
  const std::int64_t us = t.us();
  const bool neg = us < 0;
  const std::int64_t a = neg ? -us : us;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%06lld", neg ? "-" : "", static_cast<long long>(a / 1'000'000),
                static_cast<long long>(a % 1'000'000));
  return buf;
}

}  // namespace wsnsim

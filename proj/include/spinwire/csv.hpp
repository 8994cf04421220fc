#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace spinwire {

/// Shortest decimal string that round-trips the binary64 value.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_int(long long v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace spinwire

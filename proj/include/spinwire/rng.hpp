#pragma once

#include <cmath>
#include <cstdint>

namespace spinwire {

namespace detail {
// SplitMix64 finalizer; the whole generator is a pure function of its input.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform in (0, 1]; never returns 0 so log() below is safe.
inline double to_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}
}  // namespace detail

/// Counter-based normal generator: every draw is a pure function of
/// (seed, stream, counter), so values can be re-derived positionally.
/// Independent streams come from distinct stream ids; sequential use goes
/// through normal(), which just advances an internal cursor.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream)
      : key_(detail::mix64(detail::mix64(seed) ^ (stream * 0xD6E8FEB86659FD93ULL))) {}

  /// Standard normal at an absolute counter position (Box-Muller, cos branch).
  double normal_at(std::uint64_t counter) const {
    const std::uint64_t base = detail::mix64(key_ ^ detail::mix64(counter));
    const double u1 = detail::to_unit(base);
    const double u2 = detail::to_unit(detail::mix64(base ^ 0xA5A5A5A5A5A5A5A5ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double normal() { return normal_at(cursor_++); }

  std::uint64_t cursor() const { return cursor_; }
  void seek(std::uint64_t counter) { cursor_ = counter; }

 private:
  std::uint64_t key_;
  std::uint64_t cursor_ = 0;
};

}  // namespace spinwire

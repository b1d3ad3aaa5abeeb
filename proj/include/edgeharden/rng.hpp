#pragma once

#include <cstdint>
#include <random>

namespace edgeharden {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Portable random stream: std::mt19937_64 (bit-exact across standard
/// libraries) with explicit integer-to-real conversion, since the
/// std::*_distribution templates are implementation-defined.
///
/// Stream splitting rule: stream `k` of master seed `s` is seeded with
/// splitmix64(s ^ splitmix64(k + 1)). Each parameter array of an instance
/// and each random process of the evaluator owns one fixed stream id.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream)
      : engine_(splitmix64(seed ^ splitmix64(stream + 1))) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi] (inclusive).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<double>(hi - lo + 1);
    auto k = static_cast<std::int64_t>(uniform01() * span);
    if (k > hi - lo) k = hi - lo;
    return lo + k;
  }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
  }

 private:
  std::mt19937_64 engine_;
};

/// Fixed stream ids. Changing these changes every generated instance.
namespace streams {
inline constexpr std::uint64_t demand = 0;
inline constexpr std::uint64_t capacity = 1;
inline constexpr std::uint64_t unmet_penalty = 2;
inline constexpr std::uint64_t harden_base = 3;
inline constexpr std::uint64_t delay_min = 4;
inline constexpr std::uint64_t delay_dev = 5;
inline constexpr std::uint64_t scenarios = 16;
inline constexpr std::uint64_t rand_hardening = 17;
inline constexpr std::uint64_t sddu_draws = 18;
}  // namespace streams

}  // namespace edgeharden

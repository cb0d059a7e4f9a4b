#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "dcopt/types.hpp"

namespace dcopt {

/// One splitmix64 step: advances `state` and returns a well-mixed word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Fixed identifiers for the independent sub-streams consumed while
/// generating one random instance.
enum class StreamTag : std::uint64_t {
  kMatrix = 1,
  kSupport = 2,
  kGroundTruth = 3,
  kNoise = 4,
  kStart = 5,
  kPower = 6,
};

/// Seed of the (base_seed, tag) sub-stream: two splitmix64 rounds over
/// base_seed offset by the tag. The scheme is part of the on-disk
/// reproducibility contract and must not change.
inline std::uint64_t derive_stream_seed(std::uint64_t base_seed, StreamTag tag) {
  std::uint64_t state =
      base_seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(tag);
  const std::uint64_t first = splitmix64(state);
  return splitmix64(state) ^ first;
}

/// Deterministic scalar stream on top of std::mt19937_64. The engine itself
/// is fully specified by the standard; the distributions below replace the
/// implementation-defined std:: ones so that output is identical across
/// standard libraries and platforms.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0,1).
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second member of each pair is cached.
  double gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform integer in [0, bound), bound >= 1, rejection sampled so there is
  /// no modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
    std::uint64_t word;
    do {
      word = engine_();
    } while (word < threshold);
    return word % bound;
  }

  Vector gaussian_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

  Vector uniform01_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = uniform01();
    return v;
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace dcopt

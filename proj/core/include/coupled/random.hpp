#pragma once

#include <cstdint>

#include "coupled/linalg.hpp"

namespace coupled {

/// Deterministic 64-bit generator (SplitMix64).
///
/// state += 0x9E3779B97F4A7C15; z = state;
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
/// return z ^ (z >> 31);
///
/// Uniform doubles take the top 53 bits: (z >> 11) * 2^-53, in [0, 1).
/// Standard normals use the Box-Muller transform on two consecutive uniforms
/// (u1 mapped to (0, 1] as 1 - u), producing r*cos(t) first and caching
/// r*sin(t) for the next call. Every stream in the library is derived from a
/// user seed through this class, so identical seeds reproduce identical
/// streams on any platform with IEEE doubles and a correctly rounded libm.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform();
  double gaussian();
  Vec gaussian_vec(std::size_t n);

  /// Seed for an independent sub-stream, e.g. the k-th re-draw of a generator.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace coupled

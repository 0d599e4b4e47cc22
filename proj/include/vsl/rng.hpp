#pragma once

#include <cstdint>
#include <random>

namespace vsl {

// splitmix64; used to derive independent seed streams from one user seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d4a2fa9d589d5ULL;
  return x ^ (x >> 31);
}

/// Deterministic random stream. Uniform doubles are mapped from raw 64-bit
/// draws so results do not depend on the standard library's distribution
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(splitmix64(seed ^ splitmix64(stream + 1))) {}

  /// Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi]; lo == hi returns the point value exactly.
  double uniform(double lo, double hi) {
    return lo == hi ? lo : lo + uniform01() * (hi - lo);
  }

  std::uint64_t raw() { return engine_(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vsl

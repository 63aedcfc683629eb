#pragma once
// Deterministic random sampling of initial states. The generator is a
// hand-rolled splitmix64 stream keyed by (seed, stream index) so that output
// is reproducible across platforms and independent of how samples are
// distributed over worker threads.

#include <cmath>
#include <cstdint>

#include "qreset/qmath.hpp"

namespace qreset {

enum class SamplingMode { Ball, Sphere };

struct RngStream {
  std::uint64_t state;

  RngStream(std::uint64_t seed, std::uint64_t stream) {
    state = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
    next_u64();  // decorrelate nearby (seed, stream) pairs
    next_u64();
  }

  std::uint64_t next_u64() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

/// Ball: uniform over the solid Bloch ball (direction uniform, radius
/// proportional to u^{1/3}). Sphere: uniform over the unit sphere surface.
/// Draw order is fixed: cos(polar), azimuth, then radius for Ball.
inline BlochVector sample_initial_state(RngStream& rng, SamplingMode mode) {
  const double z = 1.0 - 2.0 * rng.next_double();
  const double phi = 2.0 * M_PI * rng.next_double();
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  BlochVector dir{s * std::cos(phi), s * std::sin(phi), z};
  if (mode == SamplingMode::Sphere) return dir;
  const double r = std::cbrt(rng.next_double());
  return r * dir;
}

}  // namespace qreset

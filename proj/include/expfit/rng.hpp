#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace expfit {

/// Small counter-free PRNG (SplitMix64). Chosen over <random> engines because
/// every draw must be bit-identical across platforms and thread counts; the
/// standard distributions do not guarantee that.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform on the closed complex disc of the given radius (polar method,
  /// exactly two draws per sample).
  std::complex<double> uniform_disc(double radius) {
    const double r = radius * std::sqrt(uniform01());
    const double theta = 2.0 * 3.14159265358979323846 * uniform01();
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed from a base seed and up to three stream
/// labels. Used as seed ^ hash(setting, trial) so that parallel scheduling
/// cannot change which draws a trial sees.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ULL);
  h = mix(h ^ (a + 0xbf58476d1ce4e5b9ULL));
  h = mix(h ^ (b + 0x94d049bb133111ebULL));
  h = mix(h ^ (c + 0x2545f4914f6cdd1dULL));
  return h;
}

}  // namespace expfit

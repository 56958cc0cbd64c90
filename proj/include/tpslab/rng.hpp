#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace tpslab {

/// Counter-based random stream: draw k is a pure function of (seed, k).
///
/// The mixing function is the SplitMix64 finalizer applied to
/// seed + k * golden_gamma. Gaussian draws use Box-Muller on two uniforms,
/// so the stream is bit-identical across standard library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept { return mix(seed_ + (++counter_) * kGamma); }

  /// Uniform in the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard complex normal: real and imaginary parts each N(0, 1/2).
  std::complex<double> complex_normal() noexcept {
    constexpr double kScale = std::numbers::sqrt2 / 2.0;
    const double re = normal();
    const double im = normal();
    return {kScale * re, kScale * im};
  }

  /// Independent child stream; used to give each task its own stream.
  RandomStream split() noexcept { return RandomStream(next_u64()); }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace tpslab

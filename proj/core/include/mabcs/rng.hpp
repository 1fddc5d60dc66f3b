#pragma once
/*
Deterministic counter-based random streams.

The generator is the SplitMix64 construction (Steele, Lea & Flood 2014):
output(i) = mix64(base + (i+1) * 0x9e3779b97f4a7c15), where mix64 is the
murmur-style 64-bit finalizer. Because every output is a pure function of
(base, i), a stream can be split into independent substreams by deriving a
new base, and replays are exact on any platform. Distribution samplers
(normal, gamma, beta) are implemented on top of the uniform stream so that
simulation results do not depend on the standard library's <random>
implementation.
*/

#include <cmath>
#include <cstdint>

namespace mabcs {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Derive the base of an independent substream from (seed, tag).
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed + mix64(tag + kGoldenGamma));
}

class CounterRng {
 public:
  CounterRng() = default;
  explicit CounterRng(std::uint64_t base) : base_(base) {}

  std::uint64_t next_u64() { return mix64(base_ + (++counter_) * kGoldenGamma); }

  // Uniform on [0, 1), 53-bit resolution.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; never zero, safe as a log argument.
  double next_uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  int next_bernoulli(double p) { return next_uniform() < p ? 1 : 0; }

  // Standard normal via Box-Muller. Consumes two uniforms per call; the
  // second variate is discarded to keep the draw count a pure function of
  // the call count.
  double next_normal() {
    const double u1 = next_uniform_pos();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Gamma(shape, 1) for shape >= 1, Marsaglia-Tsang squeeze method.
  double next_gamma(double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = next_normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = next_uniform_pos();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Beta(a, b) for a, b >= 1 as X/(X+Y) with independent gammas.
  double next_beta(double a, double b) {
    const double x = next_gamma(a);
    const double y = next_gamma(b);
    return x / (x + y);
  }

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t base_{0};
  std::uint64_t counter_{0};
};

}  // namespace mabcs

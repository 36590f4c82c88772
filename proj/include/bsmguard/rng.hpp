#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace bsmguard {

/// Seeded random source with platform-independent draws.
///
/// The standard distribution classes are implementation-defined, so uniform,
/// integer and normal variates are derived here directly from the 64-bit
/// Mersenne Twister output. Two Rng objects built from the same seed produce
/// identical sequences on any conforming implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  /// Gaussian variate via the Box-Muller transform (pairs are cached).
  double normal(double mean = 0.0, double stdev = 1.0);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent child seed for a named purpose from a master seed.
/// child = mix64(master ^ fnv1a64(purpose)).
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose);

/// Child seed for the i-th member of a family (e.g. the i-th tree of a forest).
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose, std::uint64_t index);

}  // namespace bsmguard

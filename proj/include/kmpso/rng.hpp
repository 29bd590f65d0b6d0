#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace kmpso {

/// Seeded random source shared by every stochastic operation.
///
/// Draws are derived from the raw 64-bit engine output with fixed
/// arithmetic rather than std:: distributions, so a seed reproduces the
/// same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Seeds from several parts (master seed, repeat, fold, ...) via seed_seq.
  Rng(std::initializer_list<std::uint64_t> parts);

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n); n must be positive.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace kmpso

#pragma once

#include <cstdint>

#include "rmdopt/dense.hpp"

namespace rmdopt {

/// Deterministic seeded random stream (SplitMix64 walker).
///
/// The integer and uniform streams are bit-exact across platforms. Gaussian
/// draws use Box-Muller, so they additionally depend on libm rounding, which
/// is stable on any one platform.
///
/// Child streams derived via split(label) depend only on (construction seed,
/// label), never on how much the parent or any sibling has consumed.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53-bit resolution.
  double next_uniform01();

  /// Standard normal (Box-Muller; generates pairs, caches the spare).
  double next_gaussian();

  /// Independent child stream identified by (seed, label).
  SeededRng split(std::uint64_t label) const;

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// rows x cols matrix of i.i.d. standard normal entries, filled row-major.
Matrix rand_gaussian(SeededRng& rng, Index rows, Index cols);

/// rows x cols matrix of i.i.d. Unif(0,1) entries, filled row-major.
Matrix rand_uniform01(SeededRng& rng, Index rows, Index cols);

}  // namespace rmdopt

#include "rmdopt/rng.hpp"

#include <cmath>
#include <numbers>

namespace rmdopt {

namespace {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kSplitSalt = 0x632BE59BD9B4E019ULL;

}  // namespace

SeededRng::SeededRng(std::uint64_t seed)
    : seed_(seed), state_(mix64(seed + kGamma)) {}

std::uint64_t SeededRng::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double SeededRng::next_uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0,1] keeps log finite.
  const double u1 = 1.0 - next_uniform01();
  const double u2 = next_uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

SeededRng SeededRng::split(std::uint64_t label) const {
  return SeededRng(mix64(seed_ ^ mix64(label + kSplitSalt)));
}

Matrix rand_gaussian(SeededRng& rng, Index rows, Index cols) {
  if (rows < 1 || cols < 1) {
    throw DimensionMismatch("rand_gaussian: rows, cols must be >= 1");
  }
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      M(i, j) = rng.next_gaussian();
    }
  }
  return M;
}

Matrix rand_uniform01(SeededRng& rng, Index rows, Index cols) {
  if (rows < 1 || cols < 1) {
    throw DimensionMismatch("rand_uniform01: rows, cols must be >= 1");
  }
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      M(i, j) = rng.next_uniform01();
    }
  }
  return M;
}

}  // namespace rmdopt

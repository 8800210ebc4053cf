#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "chrs/types.hpp"

namespace chrs {

/// Stable 64-bit mix of (seed, stream). Per-sample seeds are derived this way
/// so Monte Carlo results do not depend on evaluation order or worker count.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Stream id for a named purpose, for deriving independent substreams.
std::uint64_t stream_id(std::string_view tag);

/// Deterministic RNG: mt19937_64 bits with an explicit Box-Muller normal
/// transform, so the produced values are a pure function of the seed and do
/// not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }
  /// Uniform in (0, 1), never exactly 0 or 1.
  double uniform();
  double normal();
  Cx cnormal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }
  /// Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Complex-Gaussian vector, normalized; Haar distributed on the unit sphere.
StateVector haar_state(Index dim, std::uint64_t seed);
Vec haar_vec(Index dim, Rng& rng);

/// Haar unitary via QR of a Ginibre matrix with the R-diagonal phase fix.
Mat haar_unitary(Index dim, std::uint64_t seed);

}  // namespace chrs

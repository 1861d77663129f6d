#pragma once

#include <cstddef>
#include <cstdint>

#include "esvd/matrix.hpp"

namespace esvd {

inline constexpr std::uint64_t kDefaultSeed = 20220211;

/// SplitMix64 generator. Output i of a stream is mix(seed + (i + 1) * gamma),
/// so streams are reproducible across platforms. `substream` derives an
/// independent generator for a given stream id.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, one value per call).
  double gaussian() noexcept;
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

  Rng substream(std::uint64_t stream_id) const noexcept;

 private:
  std::uint64_t state_;
};

DenseMatrix random_uniform(std::size_t m, std::size_t n, double lo, double hi, Rng& rng);
DenseMatrix random_gaussian(std::size_t m, std::size_t n, Rng& rng);
/// Orthonormalized standard-Gaussian columns (Haar on the Stiefel manifold).
DenseMatrix random_orthonormal(std::size_t m, std::size_t r, Rng& rng);

}  // namespace esvd

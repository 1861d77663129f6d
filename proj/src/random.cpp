#include "esvd/random.hpp"

#include <cmath>
#include <numbers>

#include "esvd/orthonormalize.hpp"

namespace esvd {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() noexcept {
  state_ += kGamma;
  return mix64(state_);
}

double Rng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() noexcept {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  if (bound == 0) return 0;
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % bound;
}

Rng Rng::substream(std::uint64_t stream_id) const noexcept {
  return Rng(mix64(state_ ^ mix64(stream_id + kGamma)));
}

DenseMatrix random_uniform(std::size_t m, std::size_t n, double lo, double hi, Rng& rng) {
  DenseMatrix x(m, n);
  // Row-major fill order so the stream maps to entries independently of storage.
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.uniform(lo, hi);
  return x;
}

DenseMatrix random_gaussian(std::size_t m, std::size_t n, Rng& rng) {
  DenseMatrix x(m, n);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.gaussian();
  return x;
}

DenseMatrix random_orthonormal(std::size_t m, std::size_t r, Rng& rng) {
  DenseMatrix a = random_gaussian(m, r, rng);
  orthonormalize_columns(a);
  return a;
}

}  // namespace esvd

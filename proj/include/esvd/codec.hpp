#pragma once

// E-SVD compressed representation and the .esvd container.
//
// Container layout, all little-endian:
//   "ESVD" | version u16 (=1) | flags u16 | m u64 | n u64 | l u64 |
//   sigma[l] f64 | theta_u f64[] | theta_v f64[] | crc32 u32
// flags bit 0 / bit 1 mark a reflected square U / V factor; other bits must
// be zero. The CRC (zlib polynomial) covers every preceding byte.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "esvd/givens.hpp"
#include "esvd/matrix.hpp"
#include "esvd/svd.hpp"

namespace esvd {

inline constexpr std::uint16_t kContainerVersion = 1;
inline constexpr std::size_t kContainerHeaderBytes = 4 + 2 + 2 + 3 * 8;
inline constexpr std::size_t kContainerTrailerBytes = 4;

struct EsvdCompressed {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t l = 0;
  std::vector<double> sigma;
  AngleSet theta_u;
  AngleSet theta_v;

  /// Throws InvariantViolation / LengthMismatch when fields disagree.
  void validate() const;

  /// sigma plus both angle sets: (m + n - l) * l.
  std::size_t stored_numbers() const noexcept;

  friend bool operator==(const EsvdCompressed&, const EsvdCompressed&) = default;
};

/// Offset of angle theta_{ki} (1-based k, i) in the packed k-major layout.
/// Throws IndexOutOfRange.
std::size_t pack_index(std::size_t k, std::size_t i, std::size_t m, std::size_t r);

struct CompressOptions {
  double ortho_tol = kDefaultOrthoTol;
  double recon_tol = kDefaultReconTol;
  /// Re-run the reverse transform and check it against the factors.
  bool verify = false;
};

struct CompressResult {
  EsvdCompressed data;
  /// Factors actually parameterized (after re-orthonormalization).
  TruncatedSvd factors;
  /// Largest entry change introduced by re-orthonormalizing U and V.
  double reorth_shift = 0.0;
};

/// Re-orthonormalizes the factors and extracts both angle sets.
CompressResult compress_factors(TruncatedSvd factors, const CompressOptions& options = {});

CompressResult compress_detailed(const DenseMatrix& x, std::size_t l,
                                 const CompressOptions& options = {});
EsvdCompressed compress(const DenseMatrix& x, std::size_t l, const CompressOptions& options = {});

/// Rebuilds U and V from the angles; sigma copied.
TruncatedSvd decompress_factors(const EsvdCompressed& c);
DenseMatrix decompress(const EsvdCompressed& c);

/// Exact size of the encoded container for the given dimensions.
std::size_t encoded_size(std::size_t m, std::size_t n, std::size_t l);

std::vector<std::uint8_t> encode(const EsvdCompressed& c);
void encode_append(const EsvdCompressed& c, std::vector<std::uint8_t>& out);

/// Decodes one container at the front of `bytes`; returns it with the number
/// of bytes consumed.
std::pair<EsvdCompressed, std::size_t> decode_prefix(std::span<const std::uint8_t> bytes);
/// Decodes exactly one container; trailing bytes raise InvariantViolation.
EsvdCompressed decode(std::span<const std::uint8_t> bytes);

}  // namespace esvd

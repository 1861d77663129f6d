#pragma once

// Binary Netpbm (P5 gray / P6 RGB, maxval 255) as per-channel planes, plus the
// multi-channel .esvd-image container: one channel-count byte followed by one
// .esvd block per channel.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "esvd/codec.hpp"
#include "esvd/matrix.hpp"

namespace esvd {

struct ImagePlanes {
  std::size_t width = 0;
  std::size_t height = 0;
  int maxval = 255;
  /// One height x width plane per channel (1 or 3), values in [0, maxval].
  std::vector<DenseMatrix> planes;

  std::size_t channels() const noexcept { return planes.size(); }
};

/// Throws UnsupportedFormat (other Netpbm kinds, maxval != 255) or Malformed.
ImagePlanes read_pnm(std::span<const std::uint8_t> bytes);

/// Canonical header "P5\n<w> <h>\n255\n" (P6 for 3 channels), row-major
/// payload. Throws ValueOutOfRange for non-integral or out-of-range samples.
std::vector<std::uint8_t> write_pnm(const ImagePlanes& image);

/// Rounds half away from zero, then clamps to [0, 255].
DenseMatrix quantize_plane(const DenseMatrix& plane);

/// True when `bytes` starts like a .esvd-image (channel byte then "ESVD").
bool looks_like_esvd_image(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_image(const std::vector<EsvdCompressed>& channels);
std::vector<EsvdCompressed> decode_image(std::span<const std::uint8_t> bytes);

}  // namespace esvd

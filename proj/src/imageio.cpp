#include "esvd/imageio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "esvd/error.hpp"

namespace esvd {
namespace {

class HeaderParser {
 public:
  explicit HeaderParser(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads a decimal field.
  std::size_t number(const char* what) {
    skip_space_and_comments();
    std::size_t value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (++digits > 9) fail(ErrorCode::Malformed, std::string("PNM ") + what + " too large");
    }
    if (digits == 0) fail(ErrorCode::Malformed, std::string("PNM header: missing ") + what);
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void single_separator() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      fail(ErrorCode::Malformed, "PNM header: missing separator before raster");
    }
    ++pos_;
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

ImagePlanes read_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') fail(ErrorCode::UnsupportedFormat, "not a Netpbm file");
  int channels = 0;
  switch (bytes[1]) {
    case '5': channels = 1; break;
    case '6': channels = 3; break;
    case '1': case '2': case '3': case '4': case '7':
      fail(ErrorCode::UnsupportedFormat, std::string("Netpbm P") + char(bytes[1]) +
                                             " is not supported (binary P5/P6 only)");
    default:
      fail(ErrorCode::UnsupportedFormat, "unknown Netpbm magic");
  }

  HeaderParser header(bytes);
  ImagePlanes img;
  img.width = header.number("width");
  img.height = header.number("height");
  const std::size_t maxval = header.number("maxval");
  if (img.width == 0 || img.height == 0) fail(ErrorCode::Malformed, "PNM has zero size");
  if (maxval == 0) fail(ErrorCode::Malformed, "PNM maxval is zero");
  if (maxval != 255) {
    fail(ErrorCode::UnsupportedFormat, "only maxval 255 is supported, got " + std::to_string(maxval));
  }
  header.single_separator();

  const std::size_t payload = img.width * img.height * static_cast<std::size_t>(channels);
  const std::size_t start = header.position();
  if (bytes.size() - start != payload) {
    fail(ErrorCode::Malformed, "PNM raster has " + std::to_string(bytes.size() - start) +
                                   " bytes, expected " + std::to_string(payload));
  }

  img.maxval = 255;
  img.planes.assign(static_cast<std::size_t>(channels),
                    DenseMatrix(static_cast<Eigen::Index>(img.height),
                                static_cast<Eigen::Index>(img.width)));
  std::size_t p = start;
  for (std::size_t i = 0; i < img.height; ++i)
    for (std::size_t j = 0; j < img.width; ++j)
      for (int c = 0; c < channels; ++c)
        img.planes[static_cast<std::size_t>(c)](i, j) = static_cast<double>(bytes[p++]);
  return img;
}

std::vector<std::uint8_t> write_pnm(const ImagePlanes& img) {
  const std::size_t channels = img.channels();
  if (channels != 1 && channels != 3) {
    fail(ErrorCode::ValueOutOfRange, "PNM needs 1 or 3 channels");
  }
  if (img.maxval != 255) fail(ErrorCode::ValueOutOfRange, "only maxval 255 can be written");
  for (const auto& plane : img.planes) {
    if (plane.rows() != static_cast<Eigen::Index>(img.height) ||
        plane.cols() != static_cast<Eigen::Index>(img.width)) {
      fail(ErrorCode::ValueOutOfRange, "plane shape disagrees with image size");
    }
  }

  const std::string head = std::string(channels == 1 ? "P5" : "P6") + "\n" +
                           std::to_string(img.width) + " " + std::to_string(img.height) + "\n" +
                           std::to_string(img.maxval) + "\n";
  std::vector<std::uint8_t> out(head.begin(), head.end());
  out.reserve(out.size() + img.width * img.height * channels);
  for (std::size_t i = 0; i < img.height; ++i) {
    for (std::size_t j = 0; j < img.width; ++j) {
      for (const auto& plane : img.planes) {
        const double v = plane(i, j);
        if (!(v >= 0.0 && v <= img.maxval) || v != std::floor(v)) {
          fail(ErrorCode::ValueOutOfRange, "sample " + std::to_string(v) + " is not in 0..255");
        }
        out.push_back(static_cast<std::uint8_t>(v));
      }
    }
  }
  return out;
}

DenseMatrix quantize_plane(const DenseMatrix& plane) {
  return plane.unaryExpr([](double v) { return std::clamp(std::round(v), 0.0, 255.0); });
}

bool looks_like_esvd_image(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 5 && (bytes[0] == 1 || bytes[0] == 3) && bytes[1] == 'E' &&
         bytes[2] == 'S' && bytes[3] == 'V' && bytes[4] == 'D';
}

std::vector<std::uint8_t> encode_image(const std::vector<EsvdCompressed>& channels) {
  if (channels.size() != 1 && channels.size() != 3) {
    fail(ErrorCode::InvariantViolation, "image container needs 1 or 3 channels");
  }
  std::vector<std::uint8_t> out{static_cast<std::uint8_t>(channels.size())};
  for (const auto& c : channels) {
    if (c.m != channels.front().m || c.n != channels.front().n) {
      fail(ErrorCode::InvariantViolation, "image channels differ in shape");
    }
    encode_append(c, out);
  }
  return out;
}

std::vector<EsvdCompressed> decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) fail(ErrorCode::Truncated, "empty image container");
  const std::size_t count = bytes[0];
  if (count != 1 && count != 3) {
    fail(ErrorCode::InvariantViolation, "image container channel count must be 1 or 3");
  }
  std::vector<EsvdCompressed> out;
  std::size_t offset = 1;
  for (std::size_t c = 0; c < count; ++c) {
    auto [block, used] = decode_prefix(bytes.subspan(offset));
    if (!out.empty() && (block.m != out.front().m || block.n != out.front().n)) {
      fail(ErrorCode::InvariantViolation, "image channels differ in shape");
    }
    out.push_back(std::move(block));
    offset += used;
  }
  if (offset != bytes.size()) fail(ErrorCode::InvariantViolation, "trailing bytes after image container");
  return out;
}

}  // namespace esvd

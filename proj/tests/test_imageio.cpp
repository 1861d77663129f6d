#include <doctest.h>

#include <string>
#include <vector>

#include "esvd/codec.hpp"
#include "esvd/imageio.hpp"
#include "esvd/random.hpp"
#include "test_support.hpp"

using namespace esvd;
using esvd::testing::code_of;
using esvd::testing::golden_bytes;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& header, std::vector<std::uint8_t> payload) {
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

std::vector<std::uint8_t> random_pnm(std::size_t w, std::size_t h, bool rgb, Rng& rng) {
  std::vector<std::uint8_t> payload(w * h * (rgb ? 3 : 1));
  for (auto& b : payload) b = static_cast<std::uint8_t>(rng.below(256));
  return bytes_of(std::string(rgb ? "P6\n" : "P5\n") + std::to_string(w) + " " +
                      std::to_string(h) + "\n255\n",
                  payload);
}

}  // namespace

TEST_CASE("2x2 gray example") {
  const auto bytes = bytes_of("P5\n2 2\n255\n", {0, 255, 128, 64});
  const ImagePlanes img = read_pnm(bytes);
  REQUIRE(img.channels() == 1);
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  DenseMatrix expected(2, 2);
  expected << 0, 255, 128, 64;
  CHECK(img.planes[0] == expected);
  CHECK(write_pnm(img) == bytes);
}

TEST_CASE("1x1 color example") {
  const auto bytes = bytes_of("P6\n1 1\n255\n", {10, 20, 30});
  const ImagePlanes img = read_pnm(bytes);
  REQUIRE(img.channels() == 3);
  CHECK(img.planes[0](0, 0) == 10);
  CHECK(img.planes[1](0, 0) == 20);
  CHECK(img.planes[2](0, 0) == 30);
  CHECK(write_pnm(img) == bytes);
}

TEST_CASE("golden images round-trip byte for byte") {
  for (const char* name : {"gray_3x2.pgm", "rgb_2x2.ppm"}) {
    CAPTURE(name);
    const auto bytes = golden_bytes(name);
    CHECK(write_pnm(read_pnm(bytes)) == bytes);
  }
  const ImagePlanes rgb = read_pnm(golden_bytes("rgb_2x2.ppm"));
  CHECK(rgb.planes[2](1, 1) == 128);
  CHECK(rgb.planes[0](1, 1) == 255);
}

TEST_CASE("header comments and whitespace are accepted") {
  const auto bytes = bytes_of("P5 # gray\n# another comment\n 2\t1\r\n255\n", {7, 9});
  const ImagePlanes img = read_pnm(bytes);
  CHECK(img.width == 2);
  CHECK(img.height == 1);
  CHECK(img.planes[0](0, 1) == 9);
  CHECK(write_pnm(img) == bytes_of("P5\n2 1\n255\n", {7, 9}));
}

TEST_CASE("unsupported and malformed files") {
  CHECK(code_of([] { read_pnm(bytes_of("P2\n1 1\n255\n0\n", {})); }) == ErrorCode::UnsupportedFormat);
  CHECK(code_of([] { read_pnm(bytes_of("P3\n1 1\n255\n0 0 0\n", {})); }) ==
        ErrorCode::UnsupportedFormat);
  CHECK(code_of([] { read_pnm(bytes_of("P4\n8 1\n", {0})); }) == ErrorCode::UnsupportedFormat);
  CHECK(code_of([] { read_pnm(bytes_of("P7\nWIDTH 1\n", {})); }) == ErrorCode::UnsupportedFormat);
  CHECK(code_of([] { read_pnm(bytes_of("P5\n1 1\n65535\n", {0, 0})); }) ==
        ErrorCode::UnsupportedFormat);
  CHECK(code_of([] { read_pnm(bytes_of("P5\n1 1\n100\n", {0})); }) == ErrorCode::UnsupportedFormat);
  CHECK(code_of([] { read_pnm(bytes_of("P5\n2 2\n255\n", {1, 2, 3})); }) == ErrorCode::Malformed);
  CHECK(code_of([] { read_pnm(bytes_of("P5\n1 1\n255\n", {1, 2})); }) == ErrorCode::Malformed);
  CHECK(code_of([] { read_pnm(bytes_of("P5\n0 1\n255\n", {})); }) == ErrorCode::Malformed);
  CHECK(code_of([] { read_pnm(bytes_of("P5\n1", {})); }) == ErrorCode::Malformed);
  CHECK(code_of([] { read_pnm(bytes_of("P5\nx 1\n255\n", {0})); }) == ErrorCode::Malformed);
  CHECK(code_of([] { read_pnm(bytes_of("", {})); }) == ErrorCode::UnsupportedFormat);
}

TEST_CASE("write_pnm rejects bad samples") {
  ImagePlanes img{1, 1, 255, {DenseMatrix::Constant(1, 1, 256.0)}};
  CHECK(code_of([&] { write_pnm(img); }) == ErrorCode::ValueOutOfRange);
  img.planes[0](0, 0) = 1.5;
  CHECK(code_of([&] { write_pnm(img); }) == ErrorCode::ValueOutOfRange);
  img.planes[0](0, 0) = -1.0;
  CHECK(code_of([&] { write_pnm(img); }) == ErrorCode::ValueOutOfRange);
}

TEST_CASE("quantize examples") {
  DenseMatrix m(1, 2);
  m << -3.2, 260.0;
  DenseMatrix expected(1, 2);
  expected << 0, 255;
  CHECK(quantize_plane(m) == expected);

  DenseMatrix half(1, 3);
  half << 127.5, 0.49999999999999994, 254.5;
  const DenseMatrix q = quantize_plane(half);
  CHECK(q(0, 0) == 128);
  CHECK(q(0, 1) == 0);
  CHECK(q(0, 2) == 255);

  Rng rng(5);
  const DenseMatrix r = random_uniform(8, 8, -50, 300, rng);
  CHECK(quantize_plane(quantize_plane(r)) == quantize_plane(r));
}

TEST_CASE("full-rank image pipeline is lossless after quantization") {
  Rng rng(6);
  for (auto [w, h, rgb] : {std::tuple{24, 24, true}, std::tuple{31, 17, true},
                           std::tuple{12, 40, false}}) {
    const auto original = random_pnm(w, h, rgb, rng);
    const ImagePlanes img = read_pnm(original);
    std::vector<EsvdCompressed> channels;
    for (const DenseMatrix& plane : img.planes) {
      channels.push_back(compress(plane, std::min<std::size_t>(w, h)));
    }
    const auto container = encode_image(channels);
    CHECK(looks_like_esvd_image(container));
    CHECK_FALSE(looks_like_esvd_image(original));

    ImagePlanes out{img.width, img.height, 255, {}};
    for (const EsvdCompressed& c : decode_image(container)) {
      out.planes.push_back(quantize_plane(decompress(c)));
    }
    CHECK(write_pnm(out) == original);
  }
}

TEST_CASE("image container errors") {
  EsvdCompressed c{2, 2, 1, {1.0}, {2, 1, {0.1}, false}, {2, 1, {0.2}, false}};
  const auto one = encode_image({c});
  CHECK(one.front() == 1);
  CHECK(decode_image(one).size() == 1);

  auto bad = one;
  bad[0] = 3;  // claims three channels, holds one
  CHECK(code_of([&] { decode_image(bad); }) == ErrorCode::Truncated);
  bad = one;
  bad[0] = 2;
  CHECK(code_of([&] { decode_image(bad); }) != ErrorCode::Usage);
  bad = one;
  bad.push_back(0);
  CHECK(code_of([&] { decode_image(bad); }) != ErrorCode::Usage);
  CHECK(code_of([] { decode_image(std::vector<std::uint8_t>{}); }) != ErrorCode::Usage);
  CHECK(code_of([&] { encode_image({}); }) != ErrorCode::Usage);
}

#include "esvd/codec.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>
#include <string>

#include "esvd/error.hpp"
#include "esvd/orthonormalize.hpp"

namespace esvd {
namespace {

constexpr std::uint16_t kFlagReflectU = 1u << 0;
constexpr std::uint16_t kFlagReflectV = 1u << 1;
constexpr std::uint16_t kKnownFlags = kFlagReflectU | kFlagReflectV;

void put_le(std::vector<std::uint8_t>& out, std::uint64_t value, int bytes) {
  for (int b = 0; b < bytes; ++b) out.push_back(static_cast<std::uint8_t>(value >> (8 * b)));
}

void put_f64(std::vector<std::uint8_t>& out, double value) {
  put_le(out, std::bit_cast<std::uint64_t>(value), 8);
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t le(int width, const char* what) {
    if (remaining() < static_cast<std::size_t>(width)) {
      fail(ErrorCode::Truncated, std::string("container truncated while reading ") + what);
    }
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b) v |= std::uint64_t{bytes_[pos_ + b]} << (8 * b);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  double f64(const char* what) { return std::bit_cast<double>(le(8, what)); }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  std::size_t position() const noexcept { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const std::size_t chunk = std::min<std::size_t>(bytes.size() - offset, 1u << 30);
    crc = crc32(crc, bytes.data() + offset, static_cast<uInt>(chunk));
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

bool angle_in_range(double t) {
  return std::isfinite(t) && t > -std::numbers::pi && t <= std::numbers::pi;
}

// (m + n) * l style products overflow long before any real file would; the
// container must stay addressable.
bool checked_numbers(std::uint64_t m, std::uint64_t n, std::uint64_t l, std::uint64_t& count) {
  unsigned __int128 total = static_cast<unsigned __int128>(m + n - l) * l;
  if (m > (1ULL << 40) || n > (1ULL << 40) || total > (1ULL << 60)) return false;
  count = static_cast<std::uint64_t>(total);
  return true;
}

}  // namespace

std::size_t pack_index(std::size_t k, std::size_t i, std::size_t m, std::size_t r) {
  if (r > m || k < 1 || k > r || i <= k || i > m) {
    std::ostringstream os;
    os << "pack_index(k=" << k << ", i=" << i << ") outside the " << m << "x" << r << " triangle";
    fail(ErrorCode::IndexOutOfRange, os.str());
  }
  // sum_{j<k} (m - j) angles precede column k.
  const std::size_t before = (k - 1) * m - (k - 1) * k / 2;
  return before + (i - k - 1);
}

void EsvdCompressed::validate() const {
  if (l < 1 || l > std::min(m, n)) {
    std::ostringstream os;
    os << "rank " << l << " outside [1, min(" << m << ", " << n << ")]";
    fail(ErrorCode::InvariantViolation, os.str());
  }
  if (sigma.size() != l) fail(ErrorCode::InvariantViolation, "sigma length differs from l");
  if (theta_u.rows != m || theta_u.cols != l || theta_v.rows != n || theta_v.cols != l) {
    fail(ErrorCode::InvariantViolation, "angle set shapes disagree with (m, n, l)");
  }
  theta_u.validate();
  theta_v.validate();
  for (std::size_t i = 0; i < l; ++i) {
    if (!std::isfinite(sigma[i]) || sigma[i] < 0.0 || (i > 0 && sigma[i] > sigma[i - 1])) {
      fail(ErrorCode::InvariantViolation, "sigma must be finite, nonnegative and descending");
    }
  }
  for (const AngleSet* set : {&theta_u, &theta_v}) {
    if (!std::all_of(set->angles.begin(), set->angles.end(), angle_in_range)) {
      fail(ErrorCode::InvariantViolation, "angles must lie in (-pi, pi]");
    }
  }
}

std::size_t EsvdCompressed::stored_numbers() const noexcept {
  return sigma.size() + theta_u.angles.size() + theta_v.angles.size();
}

CompressResult compress_factors(TruncatedSvd factors, const CompressOptions& options) {
  CompressResult out;
  const double shift_u = orthonormalize_columns(factors.u);
  const double shift_v = orthonormalize_columns(factors.v);
  out.reorth_shift = std::max(shift_u, shift_v);

  EsvdCompressed& c = out.data;
  c.m = static_cast<std::size_t>(factors.u.rows());
  c.n = static_cast<std::size_t>(factors.v.rows());
  c.l = factors.rank();
  c.sigma.assign(factors.sigma.data(), factors.sigma.data() + factors.sigma.size());
  c.theta_u = givens_angles(OrthonormalColumns(factors.u, options.ortho_tol), options.ortho_tol);
  c.theta_v = givens_angles(OrthonormalColumns(factors.v, options.ortho_tol), options.ortho_tol);

  if (options.verify) {
    const double err_u = (reconstruct_orthonormal(c.theta_u).values() - factors.u).cwiseAbs().maxCoeff();
    const double err_v = (reconstruct_orthonormal(c.theta_v).values() - factors.v).cwiseAbs().maxCoeff();
    if (!(std::max(err_u, err_v) <= options.recon_tol)) {
      std::ostringstream os;
      os << "factor reconstruction error " << std::max(err_u, err_v) << " exceeds "
         << options.recon_tol;
      fail(ErrorCode::ReconstructionError, os.str());
    }
  }
  out.factors = std::move(factors);
  return out;
}

CompressResult compress_detailed(const DenseMatrix& x, std::size_t l, const CompressOptions& options) {
  return compress_factors(truncated_svd(x, l), options);
}

EsvdCompressed compress(const DenseMatrix& x, std::size_t l, const CompressOptions& options) {
  return compress_detailed(x, l, options).data;
}

TruncatedSvd decompress_factors(const EsvdCompressed& c) {
  c.validate();
  TruncatedSvd f;
  f.u = reconstruct_orthonormal(c.m, c.l, c.theta_u).values();
  f.v = reconstruct_orthonormal(c.n, c.l, c.theta_v).values();
  f.sigma = Eigen::Map<const Vector>(c.sigma.data(), static_cast<Eigen::Index>(c.sigma.size()));
  return f;
}

DenseMatrix decompress(const EsvdCompressed& c) { return reconstruct(decompress_factors(c)); }

std::size_t encoded_size(std::size_t m, std::size_t n, std::size_t l) {
  return kContainerHeaderBytes + 8 * (m + n - l) * l + kContainerTrailerBytes;
}

void encode_append(const EsvdCompressed& c, std::vector<std::uint8_t>& out) {
  c.validate();
  const std::size_t start = out.size();
  out.reserve(start + encoded_size(c.m, c.n, c.l));
  out.insert(out.end(), {'E', 'S', 'V', 'D'});
  put_le(out, kContainerVersion, 2);
  std::uint16_t flags = 0;
  if (c.theta_u.reflected) flags |= kFlagReflectU;
  if (c.theta_v.reflected) flags |= kFlagReflectV;
  put_le(out, flags, 2);
  put_le(out, c.m, 8);
  put_le(out, c.n, 8);
  put_le(out, c.l, 8);
  for (double s : c.sigma) put_f64(out, s);
  for (double t : c.theta_u.angles) put_f64(out, t);
  for (double t : c.theta_v.angles) put_f64(out, t);
  const std::uint32_t crc =
      crc32_of(std::span<const std::uint8_t>(out).subspan(start, out.size() - start));
  put_le(out, crc, 4);
}

std::vector<std::uint8_t> encode(const EsvdCompressed& c) {
  std::vector<std::uint8_t> out;
  encode_append(c, out);
  return out;
}

std::pair<EsvdCompressed, std::size_t> decode_prefix(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kMagic[4] = {'E', 'S', 'V', 'D'};
  const std::size_t magic_len = std::min<std::size_t>(bytes.size(), 4);
  if (!std::equal(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(magic_len), kMagic)) {
    fail(ErrorCode::BadMagic, "not an ESVD container (bad magic)");
  }
  Reader in(bytes);
  in.le(4, "magic");
  const auto version = static_cast<std::uint16_t>(in.le(2, "version"));
  if (version != kContainerVersion) {
    fail(ErrorCode::VersionUnsupported, "unsupported container version " + std::to_string(version));
  }
  const auto flags = static_cast<std::uint16_t>(in.le(2, "flags"));
  const std::uint64_t m = in.le(8, "m");
  const std::uint64_t n = in.le(8, "n");
  const std::uint64_t l = in.le(8, "l");
  if (flags & ~kKnownFlags) fail(ErrorCode::InvariantViolation, "unknown flag bits set");
  if (l < 1 || l > std::min(m, n)) {
    fail(ErrorCode::InvariantViolation, "header rank l outside [1, min(m, n)]");
  }
  std::uint64_t numbers = 0;
  if (!checked_numbers(m, n, l, numbers)) {
    fail(ErrorCode::InvariantViolation, "header dimensions are implausibly large");
  }
  if (in.remaining() / 8 < numbers || in.remaining() - 8 * numbers < kContainerTrailerBytes) {
    fail(ErrorCode::Truncated, "container shorter than its header declares");
  }
  const std::size_t body_end = in.position() + 8 * numbers;
  const std::uint32_t expected_crc = crc32_of(bytes.first(body_end));

  EsvdCompressed c;
  c.m = m;
  c.n = n;
  c.l = l;
  c.sigma.resize(l);
  for (auto& s : c.sigma) s = in.f64("sigma");
  c.theta_u = AngleSet{m, l, std::vector<double>(angle_count(m, l)), (flags & kFlagReflectU) != 0};
  for (auto& t : c.theta_u.angles) t = in.f64("theta_u");
  c.theta_v = AngleSet{n, l, std::vector<double>(angle_count(n, l)), (flags & kFlagReflectV) != 0};
  for (auto& t : c.theta_v.angles) t = in.f64("theta_v");

  const auto crc = static_cast<std::uint32_t>(in.le(4, "crc32"));
  if (crc != expected_crc) fail(ErrorCode::ChecksumMismatch, "container CRC32 mismatch");

  c.validate();
  return {std::move(c), in.position()};
}

EsvdCompressed decode(std::span<const std::uint8_t> bytes) {
  auto [c, used] = decode_prefix(bytes);
  if (used != bytes.size()) {
    fail(ErrorCode::InvariantViolation, "trailing bytes after ESVD container");
  }
  return std::move(c);
}

}  // namespace esvd

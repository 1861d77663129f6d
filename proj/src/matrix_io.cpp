#include "esvd/matrix_io.hpp"

#include <bit>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "esvd/error.hpp"

namespace esvd {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

DenseMatrix parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;

    std::vector<double> row;
    while (true) {
      const auto comma = line.find(',');
      const std::string_view cell = trim(line.substr(0, comma));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
        fail(ErrorCode::Malformed, "CSV line " + std::to_string(line_no) + ": bad number '" +
                                       std::string(cell) + "'");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(ErrorCode::Malformed, "CSV line " + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::Malformed, "CSV matrix is empty");

  DenseMatrix x(rows.size(), rows.front().size());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rows[i][j];
  return x;
}

std::string matrix_to_csv(const DenseMatrix& x) {
  std::string out;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j) out += ',';
      out += format_double(x(i, j));
    }
    out += '\n';
  }
  return out;
}

bool looks_like_matrix_binary(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 4 && bytes[0] == 'E' && bytes[1] == 'M' && bytes[2] == 'A' &&
         bytes[3] == 'T';
}

DenseMatrix parse_matrix_binary(std::span<const std::uint8_t> bytes) {
  if (!looks_like_matrix_binary(bytes)) fail(ErrorCode::BadMagic, "not an EMAT matrix file");
  if (bytes.size() < 20) fail(ErrorCode::Truncated, "EMAT header truncated");
  auto u64_at = [&](std::size_t offset) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= std::uint64_t{bytes[offset + b]} << (8 * b);
    return v;
  };
  const std::uint64_t m = u64_at(4);
  const std::uint64_t n = u64_at(12);
  if (m == 0 || n == 0 || m > (1ULL << 32) || n > (1ULL << 32)) {
    fail(ErrorCode::Malformed, "EMAT dimensions out of range");
  }
  const std::uint64_t payload = bytes.size() - 20;
  if (payload < 8 * m * n) fail(ErrorCode::Truncated, "EMAT payload shorter than its header declares");
  if (payload > 8 * m * n) fail(ErrorCode::Malformed, "EMAT payload longer than its header declares");
  DenseMatrix x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  std::size_t offset = 20;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      x(i, j) = std::bit_cast<double>(u64_at(offset));
      offset += 8;
    }
  }
  return x;
}

std::vector<std::uint8_t> matrix_to_binary(const DenseMatrix& x) {
  std::vector<std::uint8_t> out{'E', 'M', 'A', 'T'};
  auto put = [&](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  };
  put(static_cast<std::uint64_t>(x.rows()));
  put(static_cast<std::uint64_t>(x.cols()));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) put(std::bit_cast<std::uint64_t>(x(i, j)));
  return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

void write_file(const std::string& path, std::string_view text) {
  write_file(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()),
                                                 text.size()));
}

}  // namespace esvd

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>
#include <iosfwd>
#include <string>
#include <string_view>

#include "esvd/matrix.hpp"

namespace esvd {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Plain comma-separated rows, no header.
DenseMatrix parse_matrix_csv(std::string_view text);
std::string matrix_to_csv(const DenseMatrix& x);

/// "EMAT" | m u64 | n u64 | row-major f64, little-endian.
DenseMatrix parse_matrix_binary(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> matrix_to_binary(const DenseMatrix& x);
bool looks_like_matrix_binary(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);
void write_file(const std::string& path, std::string_view text);

}  // namespace esvd

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace esvd {

enum class ErrorCode {
  OrthonormalityViolation,
  LengthMismatch,
  ShapeError,
  RankOutOfRange,
  ConvergenceFailure,
  IndexOutOfRange,
  BadMagic,
  VersionUnsupported,
  Truncated,
  InvariantViolation,
  ChecksumMismatch,
  BudgetOutOfRange,
  DegenerateVariance,
  DegenerateSpectrum,
  UnsupportedFormat,
  Malformed,
  ValueOutOfRange,
  NonFinite,
  ReconstructionError,
  Io,
  Usage,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace esvd

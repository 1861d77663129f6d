#include "esvd/error.hpp"

namespace esvd {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OrthonormalityViolation: return "OrthonormalityViolation";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::BudgetOutOfRange: return "BudgetOutOfRange";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ReconstructionError: return "ReconstructionError";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

}  // namespace esvd

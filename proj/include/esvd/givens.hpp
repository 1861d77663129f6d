#pragma once

// Givens-angle parameterization of orthonormal column matrices.
//
// An m x r matrix A with A^T A = I_r is reduced to [I_r; 0] by the rotation
// sequence G_{k,k+1} .. G_{k,m} for k = 1..r (each G_{ki} acting on rows k and
// i only). The mr - r(r+1)/2 rotation angles are the free parameters of A and
// are enough to rebuild it exactly by applying the transposed rotations in
// reverse order.

#include <cstddef>
#include <functional>
#include <vector>

#include "esvd/matrix.hpp"

namespace esvd {

inline constexpr double kDefaultOrthoTol = 1e-10;
inline constexpr double kDefaultReconTol = 1e-12;

/// Number of rotation angles that parameterize an m x r orthonormal matrix.
constexpr std::size_t angle_count(std::size_t m, std::size_t r) noexcept {
  return m * r - r * (r + 1) / 2;
}

/// max |(A^T A - I_r)_{ij}|. Throws ShapeError when A has more columns than rows.
double orthonormality_residual(const DenseMatrix& a);

/// An m x r matrix whose columns are orthonormal within a tolerance.
class OrthonormalColumns {
 public:
  /// Checks the residual against `tol`; throws OrthonormalityViolation.
  explicit OrthonormalColumns(DenseMatrix values, double tol = kDefaultOrthoTol);

  /// Wraps a matrix already known to be orthonormal (no residual check).
  static OrthonormalColumns trusted(DenseMatrix values);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const DenseMatrix& values() const noexcept { return values_; }

 private:
  struct TrustedTag {};
  OrthonormalColumns(DenseMatrix values, TrustedTag) : values_(std::move(values)) {}

  DenseMatrix values_;
};

/// Packed rotation angles for an m x r orthonormal matrix, k-major and
/// i-ascending. `reflected` is only ever set for square inputs (r == m) whose
/// last column reduces to -e_m; see README.
struct AngleSet {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> angles;
  bool reflected = false;

  /// Throws LengthMismatch if the angle count does not match rows/cols.
  void validate() const;

  friend bool operator==(const AngleSet&, const AngleSet&) = default;
};

struct Rotation {
  double c = 1.0;
  double d = 0.0;
  double s_new = 0.0;

  /// Angle in (-pi, pi].
  double angle() const noexcept;
};

/// One incremental step of the column sweep: folds `a` into the running
/// partial norm `s_prev`. `s_prev` may be negative (the signed diagonal that
/// seeds each column); s_new is always >= 0. A zero pair yields the identity.
Rotation compute_rotation(double s_prev, double a);

/// Called after each column k (0-based) of the forward sweep with the working
/// matrix; used to check the intermediate block structure.
using SweepObserver = std::function<void(std::size_t k, const DenseMatrix& work)>;

/// Extracts the rotation angles of A in O(m r^2), never forming an m x m
/// rotation. Throws OrthonormalityViolation when the residual exceeds `ortho_tol`.
AngleSet givens_angles(const OrthonormalColumns& a, double ortho_tol = kDefaultOrthoTol,
                       const SweepObserver& observer = {});
AngleSet givens_angles(const DenseMatrix& a, double ortho_tol = kDefaultOrthoTol);

/// Rebuilds the m x r orthonormal matrix from its angles. The result is
/// orthonormal for any finite angles. Throws LengthMismatch / NonFinite.
OrthonormalColumns reconstruct_orthonormal(std::size_t m, std::size_t r, const AngleSet& theta);
OrthonormalColumns reconstruct_orthonormal(const AngleSet& theta);

}  // namespace esvd

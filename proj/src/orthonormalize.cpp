#include "esvd/orthonormalize.hpp"

#include <algorithm>
#include <cmath>

#include "esvd/error.hpp"

namespace esvd {
namespace {

// Projects column `j` of `a` off columns [0, j) twice and returns its norm.
double project_out(DenseMatrix& a, Eigen::Index j) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index p = 0; p < j; ++p) {
      const double h = a.col(p).dot(a.col(j));
      a.col(j) -= h * a.col(p);
    }
  }
  return a.col(j).norm();
}

// Replaces column j with a unit vector orthogonal to columns [0, j), drawn
// from the standard basis.
void fill_from_complement(DenseMatrix& a, Eigen::Index j) {
  const Eigen::Index m = a.rows();
  // sum_t |P e_t|^2 = m - j >= 1 for the complement projector P, so some
  // e_t keeps at least 1/sqrt(m) of its length.
  const double accept = 0.5 / std::sqrt(static_cast<double>(m));
  for (Eigen::Index t = 0; t < m; ++t) {
    a.col(j).setZero();
    a(t, j) = 1.0;
    const double norm = project_out(a, j);
    if (norm > accept) {
      a.col(j) /= norm;
      return;
    }
  }
  fail(ErrorCode::ShapeError, "cannot complete basis: too many columns");
}

}  // namespace

void complete_orthonormal_basis(DenseMatrix& basis, Eigen::Index filled) {
  for (Eigen::Index j = filled; j < basis.cols(); ++j) fill_from_complement(basis, j);
}

double orthonormalize_columns(DenseMatrix& a, double drop_tol) {
  if (a.cols() > a.rows()) fail(ErrorCode::ShapeError, "orthonormalize_columns: cols > rows");
  const DenseMatrix before = a;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double original = before.col(j).norm();
    const double norm = project_out(a, j);
    if (norm <= drop_tol * std::max(original, 1.0) || !std::isfinite(norm)) {
      fill_from_complement(a, j);
      continue;
    }
    a.col(j) /= norm;
  }
  return (a - before).cwiseAbs().maxCoeff();
}

}  // namespace esvd

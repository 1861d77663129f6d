#pragma once

#include "esvd/matrix.hpp"

namespace esvd {

/// Modified Gram-Schmidt with one reorthogonalization pass, in place.
/// Columns that collapse (norm below `drop_tol` after projection) are replaced
/// by a unit vector from the orthogonal complement of the columns kept so far.
/// Returns the largest absolute entry change.
double orthonormalize_columns(DenseMatrix& a, double drop_tol = 1e-8);

/// Appends unit vectors to `basis[:, 0..filled)` so that columns
/// `filled..cols` complete an orthonormal set. Uses standard basis candidates.
void complete_orthonormal_basis(DenseMatrix& basis, Eigen::Index filled);

}  // namespace esvd

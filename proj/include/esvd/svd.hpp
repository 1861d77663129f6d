#pragma once

#include <cstddef>
#include <vector>

#include "esvd/matrix.hpp"

namespace esvd {

/// Rank-l factors X_hat = U diag(sigma) V^T, sigma descending.
struct TruncatedSvd {
  DenseMatrix u;      // m x l, orthonormal columns
  Vector sigma;       // l, descending, >= 0
  DenseMatrix v;      // n x l, orthonormal columns

  std::size_t rank() const noexcept { return static_cast<std::size_t>(sigma.size()); }
};

struct JacobiOptions {
  int max_sweeps = 60;
};

/// Thin SVD with min(m, n) triplets by one-sided Jacobi on the columns of X
/// (or of X^T when m < n). Throws ConvergenceFailure, NonFinite.
TruncatedSvd thin_svd(const DenseMatrix& x, const JacobiOptions& options = {});

/// First l triplets of a thin SVD. Throws RankOutOfRange.
TruncatedSvd truncate(const TruncatedSvd& full, std::size_t l);

/// Best rank-l approximation factors of X.
TruncatedSvd truncated_svd(const DenseMatrix& x, std::size_t l, const JacobiOptions& options = {});

/// All min(m, n) singular values, descending.
std::vector<double> full_spectrum(const DenseMatrix& x, const JacobiOptions& options = {});

/// U diag(sigma) V^T. Throws ShapeError on inconsistent factors.
DenseMatrix reconstruct(const TruncatedSvd& f);

}  // namespace esvd

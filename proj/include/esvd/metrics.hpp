#pragma once

#include <cstddef>
#include <span>

#include "esvd/matrix.hpp"

namespace esvd {

struct MetricPair {
  double mae = 0.0;
  double rho = 0.0;
};

/// Mean absolute elementwise difference. Throws ShapeError.
double mae(const DenseMatrix& x, const DenseMatrix& y);

/// Pearson correlation of the flattened entries, population moments.
/// Throws ShapeError, DegenerateVariance.
double pearson(const DenseMatrix& x, const DenseMatrix& y);

MetricPair compare(const DenseMatrix& x, const DenseMatrix& y);

/// sum(sigma[0..l)) / sum(sigma). Throws RankOutOfRange, DegenerateSpectrum.
double coverage_p(std::span<const double> sigma_full, std::size_t l);

}  // namespace esvd

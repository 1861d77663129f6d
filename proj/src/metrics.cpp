#include "esvd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "esvd/error.hpp"

namespace esvd {
namespace {

void require_same_shape(const DenseMatrix& x, const DenseMatrix& y, const char* who) {
  if (x.rows() != y.rows() || x.cols() != y.cols() || x.size() == 0) {
    std::ostringstream os;
    os << who << ": shapes " << x.rows() << "x" << x.cols() << " and " << y.rows() << "x"
       << y.cols() << " differ or are empty";
    fail(ErrorCode::ShapeError, os.str());
  }
}

}  // namespace

double mae(const DenseMatrix& x, const DenseMatrix& y) {
  require_same_shape(x, y, "mae");
  return (x - y).cwiseAbs().sum() / static_cast<double>(x.size());
}

double pearson(const DenseMatrix& x, const DenseMatrix& y) {
  require_same_shape(x, y, "pearson");
  const double count = static_cast<double>(x.size());
  const double mean_x = x.sum() / count;
  const double mean_y = y.sum() / count;
  const auto dx = (x.array() - mean_x);
  const auto dy = (y.array() - mean_y);
  const double var_x = dx.square().sum() / count;
  const double var_y = dy.square().sum() / count;
  if (!(var_x > 0.0) || !(var_y > 0.0)) {
    fail(ErrorCode::DegenerateVariance, "pearson: a matrix has zero variance");
  }
  const double cov = (dx * dy).sum() / count;
  return std::clamp(cov / (std::sqrt(var_x) * std::sqrt(var_y)), -1.0, 1.0);
}

MetricPair compare(const DenseMatrix& x, const DenseMatrix& y) {
  return {mae(x, y), pearson(x, y)};
}

double coverage_p(std::span<const double> sigma_full, std::size_t l) {
  if (l < 1 || l > sigma_full.size()) {
    std::ostringstream os;
    os << "coverage rank " << l << " outside [1, " << sigma_full.size() << "]";
    fail(ErrorCode::RankOutOfRange, os.str());
  }
  // Same accumulation order for both sums, so l == size gives exactly 1.
  double partial = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < sigma_full.size(); ++i) {
    total += sigma_full[i];
    if (i + 1 == l) partial = total;
  }
  if (!(total > 0.0)) fail(ErrorCode::DegenerateSpectrum, "coverage: singular values sum to zero");
  return partial / total;
}

}  // namespace esvd

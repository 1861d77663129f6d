#include "esvd/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "esvd/error.hpp"
#include "esvd/orthonormalize.hpp"

namespace esvd {
namespace {

// One-sided (Hestenes) Jacobi on a tall matrix: rotates column pairs of `w`
// until they are mutually orthogonal. `w` ends up as U * diag(sigma) and
// `v` accumulates the right rotations.
void hestenes_jacobi(DenseMatrix& w, DenseMatrix& v, const JacobiOptions& options) {
  const Eigen::Index n = w.cols();
  const double tol =
      std::sqrt(static_cast<double>(w.rows())) * std::numeric_limits<double>::epsilon();
  v = DenseMatrix::Identity(n, n);

  Vector norms2(n);
  for (Eigen::Index j = 0; j < n; ++j) norms2(j) = w.col(j).squaredNorm();

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = norms2(p);
        const double beta = norms2(q);
        if (alpha == 0.0 || beta == 0.0) continue;
        const double gamma = w.col(p).dot(w.col(q));
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;

        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        for (Eigen::Index i = 0; i < w.rows(); ++i) {
          const double wp = w(i, p);
          const double wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const double vp = v(i, p);
          const double vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
        // Exact pair update drifts; refresh from the rotated columns.
        norms2(p) = w.col(p).squaredNorm();
        norms2(q) = w.col(q).squaredNorm();
      }
    }
    if (!rotated) return;
  }
  std::ostringstream os;
  os << "Jacobi SVD did not converge in " << options.max_sweeps << " sweeps";
  fail(ErrorCode::ConvergenceFailure, os.str());
}

// Thin SVD of a matrix with rows >= cols.
TruncatedSvd tall_svd(const DenseMatrix& a, const JacobiOptions& options) {
  DenseMatrix w = a;
  DenseMatrix v;
  hestenes_jacobi(w, v, options);

  const Eigen::Index n = w.cols();
  Vector norms(n);
  for (Eigen::Index j = 0; j < n; ++j) norms(j) = w.col(j).norm();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return norms(x) > norms(y); });

  TruncatedSvd out;
  out.u.resize(w.rows(), n);
  out.v.resize(n, n);
  out.sigma.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.sigma(j) = norms(src);
    out.v.col(j) = v.col(src);
    out.u.col(j) = w.col(src);
  }

  // Columns of U for numerically zero sigma carry no direction; they are
  // replaced by null-space completions.
  const double sigma_max = n > 0 ? out.sigma(0) : 0.0;
  const double cutoff = static_cast<double>(std::max(a.rows(), a.cols())) *
                        std::numeric_limits<double>::epsilon() * sigma_max;
  Eigen::Index kept = 0;
  while (kept < n && out.sigma(kept) > cutoff && out.sigma(kept) > 0.0) {
    out.u.col(kept) /= out.sigma(kept);
    ++kept;
  }
  complete_orthonormal_basis(out.u, kept);
  return out;
}

}  // namespace

TruncatedSvd thin_svd(const DenseMatrix& x, const JacobiOptions& options) {
  if (x.rows() == 0 || x.cols() == 0) fail(ErrorCode::ShapeError, "thin_svd: empty matrix");
  if (!x.allFinite()) fail(ErrorCode::NonFinite, "thin_svd: non-finite entries");
  if (x.rows() >= x.cols()) return tall_svd(x, options);
  TruncatedSvd t = tall_svd(x.transpose(), options);
  std::swap(t.u, t.v);
  return t;
}

TruncatedSvd truncate(const TruncatedSvd& full, std::size_t l) {
  if (l < 1 || l > full.rank()) {
    std::ostringstream os;
    os << "rank " << l << " outside [1, " << full.rank() << "]";
    fail(ErrorCode::RankOutOfRange, os.str());
  }
  const auto cols = static_cast<Eigen::Index>(l);
  return TruncatedSvd{full.u.leftCols(cols), full.sigma.head(cols), full.v.leftCols(cols)};
}

TruncatedSvd truncated_svd(const DenseMatrix& x, std::size_t l, const JacobiOptions& options) {
  const auto max_rank = static_cast<std::size_t>(std::min(x.rows(), x.cols()));
  if (l < 1 || l > max_rank) {
    std::ostringstream os;
    os << "rank " << l << " outside [1, " << max_rank << "]";
    fail(ErrorCode::RankOutOfRange, os.str());
  }
  return truncate(thin_svd(x, options), l);
}

std::vector<double> full_spectrum(const DenseMatrix& x, const JacobiOptions& options) {
  const TruncatedSvd t = thin_svd(x, options);
  return {t.sigma.data(), t.sigma.data() + t.sigma.size()};
}

DenseMatrix reconstruct(const TruncatedSvd& f) {
  if (f.u.cols() != f.sigma.size() || f.v.cols() != f.sigma.size()) {
    fail(ErrorCode::ShapeError, "reconstruct: factor column counts disagree with sigma");
  }
  return f.u * f.sigma.asDiagonal() * f.v.transpose();
}

}  // namespace esvd

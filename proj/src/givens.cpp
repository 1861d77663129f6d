#include "esvd/givens.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "esvd/error.hpp"

namespace esvd {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Below this partial norm the projection form of the row update would divide
// by (nearly) zero; the explicit two-row rotation is used instead.
constexpr double kTinyNorm = 1e-300;

std::string shape_string(std::size_t m, std::size_t r) {
  std::ostringstream os;
  os << m << "x" << r;
  return os.str();
}

}  // namespace

double orthonormality_residual(const DenseMatrix& a) {
  if (a.cols() > a.rows()) {
    fail(ErrorCode::ShapeError, "orthonormality_residual: more columns than rows (" +
                                    shape_string(a.rows(), a.cols()) + ")");
  }
  const DenseMatrix gram = a.transpose() * a;
  return (gram - DenseMatrix::Identity(a.cols(), a.cols())).cwiseAbs().maxCoeff();
}

OrthonormalColumns::OrthonormalColumns(DenseMatrix values, double tol)
    : values_(std::move(values)) {
  if (values_.cols() == 0 || values_.rows() == 0) {
    fail(ErrorCode::ShapeError, "orthonormal matrix must be non-empty");
  }
  if (!values_.allFinite()) fail(ErrorCode::NonFinite, "orthonormal matrix has non-finite entries");
  const double residual = orthonormality_residual(values_);
  if (!(residual <= tol)) {
    std::ostringstream os;
    os << "columns are not orthonormal: residual " << residual << " > " << tol;
    fail(ErrorCode::OrthonormalityViolation, os.str());
  }
}

OrthonormalColumns OrthonormalColumns::trusted(DenseMatrix values) {
  return OrthonormalColumns(std::move(values), TrustedTag{});
}

void AngleSet::validate() const {
  if (cols == 0 || cols > rows) {
    fail(ErrorCode::ShapeError, "angle set shape " + shape_string(rows, cols) + " is invalid");
  }
  if (angles.size() != angle_count(rows, cols)) {
    std::ostringstream os;
    os << "expected " << angle_count(rows, cols) << " angles for " << shape_string(rows, cols)
       << ", got " << angles.size();
    fail(ErrorCode::LengthMismatch, os.str());
  }
  if (reflected && rows != cols) {
    fail(ErrorCode::InvariantViolation, "reflection flag is only valid for square factors");
  }
}

double Rotation::angle() const noexcept {
  const double theta = std::atan2(d, c);
  return theta == -std::numbers::pi ? std::numbers::pi : theta;
}

Rotation compute_rotation(double s_prev, double a) {
  if (!std::isfinite(s_prev) || !std::isfinite(a)) {
    fail(ErrorCode::NonFinite, "compute_rotation: non-finite input");
  }
  Rotation rot;
  rot.s_new = std::hypot(s_prev, a);
  if (rot.s_new > 0.0) {
    rot.c = s_prev / rot.s_new;
    rot.d = a / rot.s_new;
  }
  return rot;
}

AngleSet givens_angles(const DenseMatrix& a, double ortho_tol) {
  return givens_angles(OrthonormalColumns(a, ortho_tol), ortho_tol);
}

AngleSet givens_angles(const OrthonormalColumns& input, double ortho_tol,
                       const SweepObserver& observer) {
  const double residual = orthonormality_residual(input.values());
  if (!(residual <= ortho_tol)) {
    std::ostringstream os;
    os << "givens_angles: residual " << residual << " > " << ortho_tol;
    fail(ErrorCode::OrthonormalityViolation, os.str());
  }

  const std::size_t m = input.rows();
  const std::size_t r = input.cols();
  AngleSet out;
  out.rows = m;
  out.cols = r;
  out.angles.reserve(angle_count(m, r));

  RowMajor work = input.values();
  std::vector<double> sums(r);
  std::vector<double> lead(r);

  for (std::size_t k = 0; k < r; ++k) {
    // s_kk starts as the signed diagonal; every later s is a nonnegative root.
    double s = work(k, k);
    for (std::size_t j = k + 1; j < r; ++j) {
      sums[j] = work(k, k) * work(k, j);
      lead[j] = work(k, j);
    }
    // Row k is tracked explicitly only for the first rotation and while the
    // partial norm is still below kTinyNorm. Past that prefix it is recovered
    // from the running sums as sum / s.
    bool explicit_lead = true;

    for (std::size_t i = k + 1; i < m; ++i) {
      const double a_ik = work(i, k);
      const Rotation rot = compute_rotation(s, a_ik);
      out.angles.push_back(rot.angle());

      double* row_i = work.row(static_cast<Eigen::Index>(i)).data();
      if (i > k + 1 && std::abs(s) >= kTinyNorm) explicit_lead = false;

      if (explicit_lead) {
        for (std::size_t j = k + 1; j < r; ++j) {
          const double orig = row_i[j];
          const double lj = lead[j];
          lead[j] = rot.c * lj + rot.d * orig;
          row_i[j] = -rot.d * lj + rot.c * orig;
          sums[j] += a_ik * orig;
        }
      } else {
        const double scale = -rot.d / s;
        for (std::size_t j = k + 1; j < r; ++j) {
          const double orig = row_i[j];
          row_i[j] = scale * sums[j] + rot.c * orig;
          sums[j] += a_ik * orig;
        }
      }
      work(i, k) = 0.0;
      s = rot.s_new;
    }

    if (k + 1 == m) out.reflected = work(k, k) < 0.0;
    work(k, k) = 1.0;
    for (std::size_t j = k + 1; j < r; ++j) work(k, j) = 0.0;

    if (observer) observer(k, work);
  }
  return out;
}

OrthonormalColumns reconstruct_orthonormal(std::size_t m, std::size_t r, const AngleSet& theta) {
  if (theta.rows != m || theta.cols != r) {
    fail(ErrorCode::LengthMismatch, "angle set is for " + shape_string(theta.rows, theta.cols) +
                                        ", requested " + shape_string(m, r));
  }
  theta.validate();
  for (double t : theta.angles) {
    if (!std::isfinite(t)) fail(ErrorCode::NonFinite, "reconstruct_orthonormal: non-finite angle");
  }

  RowMajor b = RowMajor::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(r));
  for (std::size_t j = 0; j < r; ++j) b(j, j) = 1.0;
  if (theta.reflected) b(r - 1, r - 1) = -1.0;

  // Column k's angles occupy a contiguous block; walk the blocks backwards.
  std::size_t end = theta.angles.size();
  for (std::size_t kk = r; kk-- > 0;) {
    const std::size_t block = m - kk - 1;
    const std::size_t begin = end - block;
    double* row_k = b.row(static_cast<Eigen::Index>(kk)).data();
    for (std::size_t i = m; i-- > kk + 1;) {
      const double t = theta.angles[begin + (i - kk - 1)];
      const double c = std::cos(t);
      const double d = std::sin(t);
      double* row_i = b.row(static_cast<Eigen::Index>(i)).data();
      // Columns left of kk are still zero in rows kk and i.
      for (std::size_t j = kk; j < r; ++j) {
        const double bk = row_k[j];
        const double bi = row_i[j];
        row_k[j] = c * bk - d * bi;
        row_i[j] = d * bk + c * bi;
      }
    }
    end = begin;
  }
  return OrthonormalColumns::trusted(DenseMatrix(b));
}

OrthonormalColumns reconstruct_orthonormal(const AngleSet& theta) {
  return reconstruct_orthonormal(theta.rows, theta.cols, theta);
}

}  // namespace esvd

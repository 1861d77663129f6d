#pragma once

#include <Eigen/Core>

namespace esvd {

/// m x n matrix of binary64 values; raw data X and reconstructions.
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace esvd

#pragma once

#include <Eigen/Dense>

namespace gscir {

// Thin SVD A = U * diag(sigma) * V^T with sigma nonincreasing.
// U is m x r, V is n x r, r = min(m, n).
struct ThinSvd {
  Eigen::MatrixXd U;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd V;
};

// Throws std::invalid_argument on non-finite input and std::runtime_error
// if the factorization fails to converge.
ThinSvd thin_svd(const Eigen::MatrixXd& A);

}  // namespace gscir

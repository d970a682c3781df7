#include "core/svd.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

extern "C" {
void openblas_set_num_threads(int);
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a, const int* lda,
             double* w, double* work, const int* lwork, int* iwork, const int* liwork,
             int* info);
}

namespace gscir {

namespace {

// Symmetric eigendecomposition, eigenvalues ascending, vectors in columns.
void sym_eig(Eigen::MatrixXd& a, Eigen::VectorXd& w) {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });

  const int n = int(a.rows());
  w.resize(n);
  const char jobz = 'V', uplo = 'L';
  int info = 0, lwork = -1, liwork = -1;
  double lwork_probe = 0.0;
  int liwork_probe = 0;
  dsyevd_(&jobz, &uplo, &n, a.data(), &n, w.data(), &lwork_probe, &lwork, &liwork_probe,
          &liwork, &info);
  if (info != 0) throw std::runtime_error("thin_svd: eig workspace query failed");
  lwork = int(lwork_probe);
  liwork = liwork_probe;
  std::vector<double> work(static_cast<size_t>(lwork));
  std::vector<int> iwork(static_cast<size_t>(liwork));
  dsyevd_(&jobz, &uplo, &n, a.data(), &n, w.data(), work.data(), &lwork, iwork.data(),
          &liwork, &info);
  if (info != 0)
    throw std::runtime_error("thin_svd: dsyevd failed, info=" + std::to_string(info));
}

}  // namespace

// Thin SVD through the Gram matrix of the short side. The recovered
// factor pairs satisfy u_i * sigma_i * v_i^T = u_i u_i^T A exactly (the
// sigma cancels), so reconstruction through this factorization is as
// accurate as the eigenbasis itself even for near-null directions.
ThinSvd thin_svd(const Eigen::MatrixXd& A) {
  if (!A.allFinite()) throw std::invalid_argument("thin_svd: non-finite input");
  const Eigen::Index m = A.rows(), n = A.cols();
  const Eigen::Index r = std::min(m, n);
  if (r < 1) throw std::invalid_argument("thin_svd: empty matrix");

  ThinSvd out;
  Eigen::MatrixXd gram(r, r);
  Eigen::VectorXd eigs;
  if (m <= n) {
    gram.noalias() = A * A.transpose();
    sym_eig(gram, eigs);
    out.U = gram.rowwise().reverse();  // descending eigenvalue order
    out.sigma = eigs.reverse().cwiseMax(0.0).cwiseSqrt();
    out.V.noalias() = A.transpose() * out.U;
    for (Eigen::Index i = 0; i < r; ++i) {
      if (out.sigma[i] > 0.0)
        out.V.col(i) /= out.sigma[i];
      else
        out.V.col(i).setZero();
    }
  } else {
    gram.noalias() = A.transpose() * A;
    sym_eig(gram, eigs);
    out.V = gram.rowwise().reverse();
    out.sigma = eigs.reverse().cwiseMax(0.0).cwiseSqrt();
    out.U.noalias() = A * out.V;
    for (Eigen::Index i = 0; i < r; ++i) {
      if (out.sigma[i] > 0.0)
        out.U.col(i) /= out.sigma[i];
      else
        out.U.col(i).setZero();
    }
  }
  return out;
}

}  // namespace gscir

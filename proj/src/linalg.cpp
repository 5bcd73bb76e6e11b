#include "dyadcov/linalg.hpp"

#include <algorithm>

namespace dyadcov {

PseudoInverse pinv_symmetric(const Matrix& A, double rel_tol, double abs_floor) {
  const Eigen::Index K = A.rows();
  PseudoInverse out{Matrix::Zero(K, K), 0};
  if (K == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(A));
  const Vector& lambda = eig.eigenvalues();
  const double largest = lambda.cwiseAbs().maxCoeff();
  const double cutoff = std::max(rel_tol * largest, abs_floor);
  if (largest <= cutoff) return out;
  Vector inv_lambda = Vector::Zero(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    if (lambda[k] > cutoff) {
      inv_lambda[k] = 1.0 / lambda[k];
      ++out.rank;
    }
  }
  const Matrix& Q = eig.eigenvectors();
  out.inverse = symmetrize(Q * inv_lambda.asDiagonal() * Q.transpose());
  return out;
}

double min_eigenvalue(const Matrix& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

Matrix clip_negative_eigenvalues(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric);
  Vector lambda = eig.eigenvalues().cwiseMax(0.0);
  const Matrix& Q = eig.eigenvectors();
  return symmetrize(Q * lambda.asDiagonal() * Q.transpose());
}

}  // namespace dyadcov

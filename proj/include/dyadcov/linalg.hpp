#pragma once

#include "dyadcov/types.hpp"

namespace dyadcov {

/// Relative eigenvalue cutoff used for every rank decision in the library.
inline constexpr double kRankTolerance = 1e-10;

struct PseudoInverse {
  Matrix inverse;
  int rank = 0;
  bool full_rank() const { return rank == inverse.rows(); }
};

/// Moore-Penrose inverse of a symmetric PSD matrix via its eigendecomposition.
/// Eigenvalues below `rel_tol` times the largest one are treated as zero.
/// Eigenvalues at or below max(rel_tol * largest, abs_floor) count as zero.
PseudoInverse pinv_symmetric(const Matrix& A, double rel_tol = kRankTolerance,
                             double abs_floor = 0.0);

/// (A + A') / 2
inline Matrix symmetrize(const Matrix& A) { return 0.5 * (A + A.transpose()); }

double min_eigenvalue(const Matrix& symmetric);

/// Clips the negative eigenvalues of a symmetric matrix to zero.
Matrix clip_negative_eigenvalues(const Matrix& symmetric);

}  // namespace dyadcov

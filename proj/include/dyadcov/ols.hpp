#pragma once

#include "dyadcov/dataset.hpp"
#include "dyadcov/types.hpp"

namespace dyadcov {

struct RegressionFit {
  Vector beta;
  Matrix gram;      // X'X
  Matrix gram_inv;  // (X'X)^{-1}, or its pseudo-inverse when rank deficient
  Vector residuals;
  Matrix scores;  // row m = X.row(m) * residuals[m]
  int rank = 0;
  bool rank_deficient = false;
};

/// OLS by column-pivoted QR. A singular gram falls back to the minimum-norm
/// pseudo-inverse solution and sets `rank_deficient`.
RegressionFit fit_ols(const DyadicDataset& ds);

/// Full-sample cross products, the starting point for delete-block refits.
struct CrossProducts {
  Matrix gram;
  Vector xty;
};

CrossProducts cross_products(const DyadicDataset& ds);

}  // namespace dyadcov

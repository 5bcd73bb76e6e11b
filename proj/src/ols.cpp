#include "dyadcov/ols.hpp"

#include "dyadcov/error.hpp"
#include "dyadcov/linalg.hpp"

namespace dyadcov {

CrossProducts cross_products(const DyadicDataset& ds) {
  CrossProducts cp;
  cp.gram = Matrix(ds.K(), ds.K());
  cp.gram.setZero();
  cp.gram.selfadjointView<Eigen::Lower>().rankUpdate(ds.X.transpose());
  cp.gram = cp.gram.selfadjointView<Eigen::Lower>();
  cp.xty = ds.X.transpose() * ds.y;
  return cp;
}

RegressionFit fit_ols(const DyadicDataset& ds) {
  if (ds.M() == 0 || ds.K() == 0)
    throw Error(ErrorCode::EmptyDataset, "cannot fit an empty dataset");

  RegressionFit fit;
  auto cp = cross_products(ds);
  fit.gram = std::move(cp.gram);
  auto pinv = pinv_symmetric(fit.gram);
  fit.rank = pinv.rank;
  fit.rank_deficient = !pinv.full_rank();
  fit.gram_inv = std::move(pinv.inverse);

  if (fit.rank_deficient) {
    fit.beta = fit.gram_inv * cp.xty;
  } else {
    fit.beta = ds.X.colPivHouseholderQr().solve(ds.y);
  }
  fit.residuals = ds.y - ds.X * fit.beta;
  fit.scores = ds.X.array().colwise() * fit.residuals.array();
  return fit;
}

}  // namespace dyadcov

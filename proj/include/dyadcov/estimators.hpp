#pragma once

#include "dyadcov/dataset.hpp"
#include "dyadcov/ols.hpp"
#include "dyadcov/variance.hpp"

namespace dyadcov {

struct EstimateOptions {
  bool psd_fix = false;
  Exec exec = Exec::parallel;
};

/// Computes one variance estimator for a fitted regression. `L` is ignored
/// by the kinds that do not take a bandwidth.
VarianceEstimate estimate_variance(EstimatorKind kind, const DyadicDataset& ds,
                                   const RegressionFit& fit, int L,
                                   const EstimateOptions& opts = {});

}  // namespace dyadcov

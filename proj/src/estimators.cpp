#include "dyadcov/estimators.hpp"

#include "dyadcov/jackknife.hpp"
#include "dyadcov/linalg.hpp"

namespace dyadcov {

VarianceEstimate estimate_variance(EstimatorKind kind, const DyadicDataset& ds,
                                   const RegressionFit& fit, int L,
                                   const EstimateOptions& opts) {
  const SandwichOptions sw{opts.psd_fix};
  const auto& S = fit.scores;
  switch (kind) {
    case EstimatorKind::IID:
      return var_iid(fit, ds.M(), ds.K());
    case EstimatorKind::White:
      return sandwich(meat_white(S), fit.gram_inv, kind, {}, sw);
    case EstimatorKind::OneWay1:
      return sandwich(meat_oneway(S, ds.dyads, ds.n, ClusterIndex::first),
                      fit.gram_inv, kind, {}, sw);
    case EstimatorKind::OneWay2:
      return sandwich(meat_oneway(S, ds.dyads, ds.n, ClusterIndex::second),
                      fit.gram_inv, kind, {}, sw);
    case EstimatorKind::TwoWay:
      return sandwich(meat_twoway(S, ds.dyads, ds.n), fit.gram_inv, kind, {}, sw);
    case EstimatorKind::Dyadic:
      return sandwich(meat_dyadic(S, ds.dyads, ds.n, opts.exec), fit.gram_inv,
                      kind, {}, sw);
    case EstimatorKind::DNDyadic: {
      bool clamped = false;
      const int used = clamp_bandwidth(L, ds.n, &clamped);
      auto est = sandwich(meat_dn(S, ds.dyads, ds.n, used, opts.exec),
                          fit.gram_inv, kind, used, sw);
      est.bandwidth_clamped = clamped;
      return est;
    }
    case EstimatorKind::DNDyadicNoDC: {
      bool clamped = false;
      const int used = clamp_bandwidth(L, ds.n, &clamped);
      auto est = sandwich(meat_dn_nodc(node_scores(S, ds.dyads, ds.n), used),
                          fit.gram_inv, kind, used, sw);
      est.bandwidth_clamped = clamped;
      return est;
    }
    case EstimatorKind::JK:
    case EstimatorKind::JKNoDC: {
      const bool corrected = kind == EstimatorKind::JK;
      auto jk = jk_variance(ds, fit, L, corrected, opts.exec);
      VarianceEstimate est;
      est.kind = kind;
      est.bandwidth = L;
      est.pseudo_inverse_count = jk.pseudo_inverse_used;
      est.min_eigenvalue = min_eigenvalue(jk.V);
      if (opts.psd_fix && est.min_eigenvalue < 0.0) {
        est.V = clip_negative_eigenvalues(jk.V);
        est.psd_fixed = true;
      } else {
        est.V = std::move(jk.V);
      }
      return est;
    }
  }
  return {};
}

}  // namespace dyadcov

#pragma once

#include <span>
#include <vector>

#include "dyadcov/dataset.hpp"
#include "dyadcov/ols.hpp"
#include "dyadcov/types.hpp"

namespace dyadcov {

/// Node block {start, ..., start + length - 1} and the rows of every dyad
/// with an endpoint inside it.
struct BlockDeletion {
  int start = 1;
  int length = 1;
  std::vector<int> touched;
};

/// The n - L + 1 overlapping blocks. Throws BlockTooLong unless 1 <= L < n.
std::vector<BlockDeletion> block_deletion_sets(std::span<const Dyad> dyads,
                                               int n, int L);

struct DeleteBlockFit {
  Vector beta;
  bool pseudo_inverse = false;
};

/// Refit without the touched dyads by downdating the full-sample cross
/// products. A rank-deficient downdated gram uses its pseudo-inverse.
DeleteBlockFit delete_block_fit(const DyadicDataset& ds,
                                const CrossProducts& full,
                                const BlockDeletion& block);

struct JackknifeResult {
  Matrix V0;  // (1/L) sum of (beta_l - beta)(beta_l - beta)'
  Matrix V;   // V0 - gram_inv * white * gram_inv
  Matrix deleted_betas;
  int pseudo_inverse_used = 0;
};

/// Row-column moving-block jackknife. V is always populated with the
/// corrected matrix; `corrected` only controls whether the correction is
/// computed (when false, V == V0).
JackknifeResult jk_variance(const DyadicDataset& ds, const RegressionFit& fit,
                            int L, bool corrected = true,
                            Exec exec = Exec::parallel);

}  // namespace dyadcov

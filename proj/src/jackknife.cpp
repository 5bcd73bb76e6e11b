#include "dyadcov/jackknife.hpp"

#include <string>

#include "dyadcov/error.hpp"
#include "dyadcov/linalg.hpp"
#include "dyadcov/variance.hpp"

namespace dyadcov {

namespace {
constexpr double kDowndateFloor = 1e-12;
}  // namespace

std::vector<BlockDeletion> block_deletion_sets(std::span<const Dyad> dyads,
                                               int n, int L) {
  if (L < 1 || L >= n)
    throw Error(ErrorCode::BlockTooLong,
                "block length " + std::to_string(L) + " needs 1 <= L < n = " +
                    std::to_string(n));
  std::vector<BlockDeletion> blocks;
  blocks.reserve(static_cast<std::size_t>(n - L + 1));
  for (int start = 1; start <= n - L + 1; ++start) {
    BlockDeletion b{start, L, {}};
    const int end = start + L - 1;
    for (std::size_t m = 0; m < dyads.size(); ++m) {
      const auto& d = dyads[m];
      if ((d.i >= start && d.i <= end) || (d.j >= start && d.j <= end))
        b.touched.push_back(static_cast<int>(m));
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

DeleteBlockFit delete_block_fit(const DyadicDataset& ds,
                                const CrossProducts& full,
                                const BlockDeletion& block) {
  Matrix gram = full.gram;
  Vector xty = full.xty;
  for (int m : block.touched) {
    const auto x = ds.X.row(m).transpose();
    gram.noalias() -= x * x.transpose();
    xty.noalias() -= ds.y[m] * x;
  }
  // Downdating leaves roundoff of order eps * trace(full gram) where the
  // surviving rows span nothing; treat that as zero.
  const double floor = kDowndateFloor * full.gram.trace();
  const auto pinv = pinv_symmetric(gram, kRankTolerance, floor);
  return {pinv.inverse * xty, !pinv.full_rank()};
}

JackknifeResult jk_variance(const DyadicDataset& ds, const RegressionFit& fit,
                            int L, bool corrected, Exec exec) {
  const auto blocks = block_deletion_sets(ds.dyads, ds.n, L);
  const CrossProducts full = cross_products(ds);
  const auto B = static_cast<Eigen::Index>(blocks.size());

  JackknifeResult out;
  out.deleted_betas.resize(B, ds.K());
  std::vector<char> pseudo(blocks.size(), 0);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (Eigen::Index b = 0; b < B; ++b) {
    auto refit = delete_block_fit(ds, full, blocks[static_cast<std::size_t>(b)]);
    out.deleted_betas.row(b) = refit.beta.transpose();
    pseudo[static_cast<std::size_t>(b)] = refit.pseudo_inverse;
  }
  for (char p : pseudo) out.pseudo_inverse_used += p;

  const Matrix D = out.deleted_betas.rowwise() - fit.beta.transpose();
  out.V0 = symmetrize(D.transpose() * D) / static_cast<double>(L);
  if (corrected) {
    // Full-sample White term, not recomputed per deletion.
    out.V = out.V0 - symmetrize(fit.gram_inv * meat_white(fit.scores) * fit.gram_inv);
  } else {
    out.V = out.V0;
  }
  return out;
}

}  // namespace dyadcov

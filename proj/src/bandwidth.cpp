#include "dyadcov/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "dyadcov/error.hpp"

namespace dyadcov {

int bandwidth_cap(int n) {
  // Largest h with h^5 <= n^2, i.e. floor(n^(2/5)) without pow() roundoff.
  const std::int64_t n2 = static_cast<std::int64_t>(n) * n;
  auto fifth = [](std::int64_t h) { return h * h * h * h * h; };
  std::int64_t h = 1;
  while (fifth(h + 1) <= n2) ++h;
  return static_cast<int>(h);
}

BandwidthSelection select_bandwidth(const NodeScores& node) {
  const int n = node.n();
  if (n < 2)
    throw Error(ErrorCode::InvalidArgument,
                "bandwidth selection needs at least two nodes");

  BandwidthSelection sel;
  sel.h_max = bandwidth_cap(n);
  sel.threshold = std::sqrt(std::log(static_cast<double>(n)) / n);

  const Matrix centered = node.G.rowwise() - node.G.colwise().mean();
  const Eigen::Index K = centered.cols();
  sel.rho_max.assign(static_cast<std::size_t>(sel.h_max), 0.0);
  for (int h = 1; h <= sel.h_max && h < n; ++h) {
    const auto head = centered.topRows(n - h);
    const auto tail = centered.bottomRows(n - h);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) {
      const double denom =
          std::sqrt(head.col(k).squaredNorm()) * std::sqrt(tail.col(k).squaredNorm());
      const double rho = denom > 0.0 ? head.col(k).dot(tail.col(k)) / denom : 0.0;
      worst = std::max(worst, std::abs(rho));
    }
    sel.rho_max[static_cast<std::size_t>(h - 1)] = worst;
  }

  const int last_start = sel.h_max - (kQuietRun - 1);
  for (int h = 1; h <= last_start; ++h) {
    bool quiet = true;
    for (int j = h; j < h + kQuietRun && quiet; ++j)
      quiet = sel.rho_max[static_cast<std::size_t>(j - 1)] < sel.threshold;
    if (quiet) {
      sel.L = std::clamp(h, 1, sel.h_max);
      return sel;
    }
  }
  sel.L = std::max(1, sel.h_max);
  sel.defaulted = true;
  return sel;
}

int scaled_bandwidth(const BandwidthSelection& sel, double sigma) {
  if (!(sigma > 0.0))
    throw Error(ErrorCode::InvalidArgument, "sigma_L must be positive");
  const double scaled = std::round(sigma * sel.L);
  return std::max(1, static_cast<int>(scaled));
}

}  // namespace dyadcov

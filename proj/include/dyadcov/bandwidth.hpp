#pragma once

#include <vector>

#include "dyadcov/variance.hpp"

namespace dyadcov {

struct BandwidthSelection {
  int L = 1;
  int h_max = 1;
  double threshold = 0.0;
  std::vector<double> rho_max;  // rho_max[h - 1] for h = 1..h_max
  bool defaulted = false;
};

/// floor(n^(2/5)) computed in integer arithmetic, at least 1.
int bandwidth_cap(int n);

/// Number of consecutive lags that must all fall below the threshold.
inline constexpr int kQuietRun = 5;

/// Picks the first lag h in 1..h_max-4 such that the maximal absolute
/// componentwise autocorrelation of the centered node scores stays below
/// sqrt(log n / n) at lags h..h+4. Without such a lag (or with an empty
/// search range) L defaults to h_max.
BandwidthSelection select_bandwidth(const NodeScores& node);

/// round(sigma * L), half away from zero, at least 1.
int scaled_bandwidth(const BandwidthSelection& sel, double sigma);

}  // namespace dyadcov

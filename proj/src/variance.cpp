#include "dyadcov/variance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "dyadcov/error.hpp"
#include "dyadcov/kernel.hpp"
#include "dyadcov/linalg.hpp"

namespace dyadcov {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::IID: return "IID";
    case EstimatorKind::White: return "White";
    case EstimatorKind::OneWay1: return "OneWay1";
    case EstimatorKind::OneWay2: return "OneWay2";
    case EstimatorKind::TwoWay: return "TwoWay";
    case EstimatorKind::Dyadic: return "Dyadic";
    case EstimatorKind::DNDyadic: return "DNDyadic";
    case EstimatorKind::DNDyadicNoDC: return "DNDyadicNoDC";
    case EstimatorKind::JK: return "JK";
    case EstimatorKind::JKNoDC: return "JKNoDC";
  }
  return "?";
}

EstimatorKind parse_estimator(std::string_view name) {
  for (auto kind : kAllEstimators)
    if (to_string(kind) == name) return kind;
  throw Error(ErrorCode::InvalidArgument,
              "unknown estimator '" + std::string(name) + "'");
}

bool uses_bandwidth(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::DNDyadic:
    case EstimatorKind::DNDyadicNoDC:
    case EstimatorKind::JK:
    case EstimatorKind::JKNoDC:
      return true;
    default:
      return false;
  }
}

NodeScores node_scores(const Matrix& scores, std::span<const Dyad> dyads,
                       int n) {
  NodeScores out{Matrix::Zero(n, scores.cols())};
  for (std::size_t m = 0; m < dyads.size(); ++m) {
    const auto row = scores.row(static_cast<Eigen::Index>(m));
    out.G.row(dyads[m].i - 1) += row;
    out.G.row(dyads[m].j - 1) += row;
  }
  return out;
}

Matrix meat_white(const Matrix& scores) {
  return symmetrize(scores.transpose() * scores);
}

Matrix meat_oneway(const Matrix& scores, std::span<const Dyad> dyads, int n,
                   ClusterIndex which) {
  Matrix sums = Matrix::Zero(n, scores.cols());
  for (std::size_t m = 0; m < dyads.size(); ++m) {
    const int key = which == ClusterIndex::first ? dyads[m].i : dyads[m].j;
    sums.row(key - 1) += scores.row(static_cast<Eigen::Index>(m));
  }
  return symmetrize(sums.transpose() * sums);
}

Matrix meat_twoway(const Matrix& scores, std::span<const Dyad> dyads, int n) {
  return meat_oneway(scores, dyads, n, ClusterIndex::first) +
         meat_oneway(scores, dyads, n, ClusterIndex::second) -
         meat_white(scores);
}

namespace {

// Scores of every dyad sharing a node with dyad m (m itself included once).
// meat_dyadic and meat_dn both go through here so that L = 1 agrees bitwise.
inline Vector shared_node_sum(const Matrix& G, const Matrix& scores_t,
                              const Dyad& d, Eigen::Index m) {
  return G.row(d.i - 1).transpose() + G.row(d.j - 1).transpose() -
         scores_t.col(m);
}

inline Matrix outer_sum(const Matrix& scores_t, const Matrix& weighted_t) {
  return symmetrize(scores_t * weighted_t.transpose());
}

}  // namespace

Matrix meat_dyadic(const Matrix& scores, std::span<const Dyad> dyads, int n,
                   Exec exec) {
  const Matrix G = node_scores(scores, dyads, n).G;
  const Matrix scores_t = scores.transpose();
  Matrix weighted_t(scores.cols(), scores.rows());
  const auto M = static_cast<Eigen::Index>(dyads.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (Eigen::Index m = 0; m < M; ++m)
    weighted_t.col(m) = shared_node_sum(G, scores_t, dyads[m], m);
  return outer_sum(scores_t, weighted_t);
}

int clamp_bandwidth(int L, int n, bool* clamped) {
  if (L < 1)
    throw Error(ErrorCode::InvalidArgument, "bandwidth must be at least 1");
  const bool too_large = L >= n;
  if (clamped) *clamped = too_large;
  return too_large ? std::max(1, n - 1) : L;
}

Matrix meat_dn(const Matrix& scores, std::span<const Dyad> dyads, int n, int L,
               Exec exec) {
  L = clamp_bandwidth(L, n);
  const Matrix G = node_scores(scores, dyads, n).G;
  const Matrix scores_t = scores.transpose();
  const Eigen::Index K = scores.cols();
  const auto M = static_cast<Eigen::Index>(dyads.size());
  const DyadIndex index(dyads, n);
  Matrix weighted_t(K, M);

  Vector kernel(L);
  for (int h = 0; h < L; ++h) kernel[h] = bartlett_weight(h, L);

#pragma omp parallel if (exec == Exec::parallel)
  {
    Matrix buckets(K, L);
#pragma omp for schedule(dynamic, 16)
    for (Eigen::Index m = 0; m < M; ++m) {
      const Dyad d = dyads[m];
      Vector w = shared_node_sum(G, scores_t, d, m);
      if (L > 1) {
        buckets.setZero();
        auto dist = [&](int x) {
          return std::min(std::abs(x - d.i), std::abs(x - d.j));
        };
        // Nodes at distance 1..L-1 from the dyad; every dyad at distance
        // h >= 1 has a near endpoint and avoids both i and j.
        const int lo = std::max(1, d.i - (L - 1));
        const int hi = std::min(n, d.j + (L - 1));
        for (int r = lo; r <= hi; ++r) {
          const int hr = dist(r);
          if (hr == 0 || hr >= L) continue;
          for (int t = 1; t <= n; ++t) {
            if (t == r || t == d.i || t == d.j) continue;
            const int ht = dist(t);
            // A pair with two near endpoints is visited from its smaller one.
            if (ht < L && t < r) continue;
            const int idx = index(r, t);
            if (idx < 0) continue;
            buckets.col(std::min(hr, ht)) += scores_t.col(idx);
          }
        }
        for (int h = 1; h < L; ++h) w += kernel[h] * buckets.col(h);
      }
      weighted_t.col(m) = w;
    }
  }
  return outer_sum(scores_t, weighted_t);
}

Matrix meat_dn_nodc(const NodeScores& node, int L) {
  if (L < 1)
    throw Error(ErrorCode::InvalidArgument, "bandwidth must be at least 1");
  const Matrix& G = node.G;
  const int n = node.n();
  Matrix H = Matrix::Zero(G.rows(), G.cols());
  for (int r = 0; r < n; ++r) {
    const int lo = std::max(0, r - (L - 1));
    const int hi = std::min(n - 1, r + (L - 1));
    for (int s = lo; s <= hi; ++s) H.row(r) += bartlett_weight(r - s, L) * G.row(s);
  }
  return symmetrize(G.transpose() * H);
}

VarianceEstimate sandwich(const Matrix& meat, const Matrix& gram_inv,
                          EstimatorKind kind, std::optional<int> L,
                          SandwichOptions opts) {
  if (meat.rows() != gram_inv.rows() || meat.cols() != gram_inv.cols())
    throw Error(ErrorCode::InvalidArgument, "meat and gram_inv shapes differ");
  VarianceEstimate est;
  est.kind = kind;
  est.bandwidth = L;
  est.min_eigenvalue = min_eigenvalue(meat);
  const bool fix = opts.psd_fix && est.min_eigenvalue < 0.0;
  const Matrix fixed = fix ? clip_negative_eigenvalues(meat) : Matrix();
  est.V = symmetrize(gram_inv * (fix ? fixed : meat) * gram_inv);
  est.psd_fixed = fix;
  return est;
}

VarianceEstimate var_iid(const RegressionFit& fit, std::size_t M, int K) {
  if (M <= static_cast<std::size_t>(K))
    throw Error(ErrorCode::DegenerateDof,
                "IID variance needs more dyads than regressors");
  const double sigma2 =
      fit.residuals.squaredNorm() / static_cast<double>(M - static_cast<std::size_t>(K));
  VarianceEstimate est;
  est.kind = EstimatorKind::IID;
  est.V = sigma2 * fit.gram_inv;
  est.min_eigenvalue = min_eigenvalue(est.V);
  return est;
}

TestResult t_test(const Vector& beta, const Matrix& V, const Vector& contrast,
                  double null_value) {
  if (contrast.size() != beta.size() || V.rows() != beta.size())
    throw Error(ErrorCode::InvalidArgument, "contrast length mismatch");
  if (contrast.isZero(0.0))
    throw Error(ErrorCode::InvalidArgument, "contrast must be nonzero");
  const double var = contrast.dot(V * contrast);
  if (!(var > 0.0) || !std::isfinite(var))
    throw Error(ErrorCode::NonpositiveVariance,
                "contrast variance is not positive");
  TestResult r;
  r.se = std::sqrt(var);
  r.t = (contrast.dot(beta) - null_value) / r.se;
  r.p = std::erfc(std::abs(r.t) / std::sqrt(2.0));
  return r;
}

double normal_critical_value(double level) {
  if (!(level > 0.0 && level < 1.0))
    throw Error(ErrorCode::InvalidArgument, "level must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal(), 1.0 - level / 2.0);
}

}  // namespace dyadcov

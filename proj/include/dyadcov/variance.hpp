#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "dyadcov/dataset.hpp"
#include "dyadcov/ols.hpp"
#include "dyadcov/types.hpp"

namespace dyadcov {

enum class EstimatorKind {
  IID,
  White,
  OneWay1,
  OneWay2,
  TwoWay,
  Dyadic,
  DNDyadic,
  DNDyadicNoDC,
  JK,
  JKNoDC,
};

inline constexpr std::array<EstimatorKind, 10> kAllEstimators = {
    EstimatorKind::IID,     EstimatorKind::White,    EstimatorKind::OneWay1,
    EstimatorKind::OneWay2, EstimatorKind::TwoWay,   EstimatorKind::Dyadic,
    EstimatorKind::DNDyadic, EstimatorKind::DNDyadicNoDC, EstimatorKind::JK,
    EstimatorKind::JKNoDC};

std::string_view to_string(EstimatorKind kind);
/// Accepts the names produced by to_string; throws InvalidArgument otherwise.
EstimatorKind parse_estimator(std::string_view name);
/// True for the kinds that consume a bandwidth.
bool uses_bandwidth(EstimatorKind kind);

struct VarianceEstimate {
  EstimatorKind kind = EstimatorKind::White;
  Matrix V;
  std::optional<int> bandwidth;
  double min_eigenvalue = 0.0;  // of the meat (of V for the jackknife kinds)
  bool psd_fixed = false;
  bool bandwidth_clamped = false;
  int pseudo_inverse_count = 0;
};

/// Row r holds the sum of the score rows of every dyad touching node r.
struct NodeScores {
  Matrix G;
  int n() const { return static_cast<int>(G.rows()); }
};

NodeScores node_scores(const Matrix& scores, std::span<const Dyad> dyads,
                       int n);

Matrix meat_white(const Matrix& scores);

enum class ClusterIndex { first, second };

/// Clusters dyads on their first (i) or second (j) rank.
Matrix meat_oneway(const Matrix& scores, std::span<const Dyad> dyads, int n,
                   ClusterIndex which);

/// oneway(first) + oneway(second) - white.
Matrix meat_twoway(const Matrix& scores, std::span<const Dyad> dyads, int n);

/// Sum of s_d s_d'' over ordered pairs of dyads sharing a node (self pairs
/// included).
Matrix meat_dyadic(const Matrix& scores, std::span<const Dyad> dyads, int n,
                   Exec exec = Exec::parallel);

/// Bandwidths at or above n are clamped to n - 1. Returns the value used.
int clamp_bandwidth(int L, int n, bool* clamped = nullptr);

/// Bartlett-weighted sum over all ordered dyad pairs, weighted by endpoint
/// distance.
///
/// For each dyad d the neighbours with distance h < L are bucketed by h and
/// their scores summed; the bucket sums are combined with the kernel weights
/// into one vector w_d and the meat is S'W, symmetrized. Bucket 0 is
/// G_i + G_j - s_d, so L = 1 reproduces meat_dyadic bit for bit.
/// Cost O(n^3 L K + n^2 K^2).
Matrix meat_dn(const Matrix& scores, std::span<const Dyad> dyads, int n, int L,
               Exec exec = Exec::parallel);

/// Bartlett HAC applied to the ordered node-score sequence. Each dyad enters
/// through both of its endpoints, so self pairs are counted twice.
Matrix meat_dn_nodc(const NodeScores& node, int L);

struct SandwichOptions {
  bool psd_fix = false;
};

/// V = gram_inv * meat * gram_inv, symmetrized.
VarianceEstimate sandwich(const Matrix& meat, const Matrix& gram_inv,
                          EstimatorKind kind, std::optional<int> L = {},
                          SandwichOptions opts = {});

/// (RSS / (M - K)) * gram_inv. Throws DegenerateDof when M <= K.
VarianceEstimate var_iid(const RegressionFit& fit, std::size_t M, int K);

struct TestResult {
  double t = 0.0;
  double p = 1.0;
  double se = 0.0;
};

/// Two-sided normal test of a'beta = null_value. Throws NonpositiveVariance
/// when a'Va <= 0 (or is not finite).
TestResult t_test(const Vector& beta, const Matrix& V, const Vector& contrast,
                  double null_value);

/// Two-sided standard-normal critical value for the given level.
double normal_critical_value(double level);

}  // namespace dyadcov

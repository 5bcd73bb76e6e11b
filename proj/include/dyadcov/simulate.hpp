#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dyadcov/dataset.hpp"
#include "dyadcov/rng.hpp"
#include "dyadcov/variance.hpp"

namespace dyadcov {

struct SimConfig {
  int n = 50;
  int K = 10;
  double rho = 0.0;
  double omega = 1.0;
  double gamma_het = 0.5;
  int reps = 5000;
  std::uint64_t seed = 1;
  double level = 0.05;
  std::vector<EstimatorKind> estimators{kAllEstimators.begin(),
                                        kAllEstimators.end()};
  double sigma_L = 1.0;
  bool psd_fix = false;
};

/// Throws InvalidArgument on out-of-range fields.
void validate(const SimConfig& cfg);

/// Stationary Gaussian AR(1) along the rows: row 1 ~ N(0, I), then
/// row r = rho * row(r-1) + sqrt(1 - rho^2) * N(0, I). Draws are consumed
/// row-major.
Matrix gen_ar1_nodes(int n, double rho, int dim, NormalStream& stream);
/// Same recursion with the standard-normal draws supplied by `draw`.
Matrix gen_ar1_nodes(int n, double rho, int dim,
                     const std::function<double()>& draw);

struct SimSample {
  DyadicDataset ds;
  Vector beta_true;
};

/// Complete dyadic array from the ordered-node design. Draw order: node
/// shocks for x (n x K), node shocks for u (n x 1), then for every dyad in
/// lexicographic order K idiosyncratic regressor shocks followed by one
/// idiosyncratic error shock. The outcome uses the drawn regressors; the
/// first column is replaced by the intercept afterwards.
SimSample gen_dyadic_sample(const SimConfig& cfg, NormalStream& stream);

enum class TestOutcome : std::uint8_t { NotRun, Accept, Reject, Failure };

struct ReplicationResult {
  std::array<TestOutcome, kAllEstimators.size()> outcome{};
  int L = 1;
  bool bandwidth_defaulted = false;

  TestOutcome operator[](EstimatorKind kind) const {
    return outcome[static_cast<std::size_t>(kind)];
  }
};

/// Runs every requested estimator on one sample and tests beta_K = beta_true_K.
ReplicationResult evaluate_sample(const SimConfig& cfg, const SimSample& sample);

/// Generates the sample of replication `rep_index` and evaluates it.
ReplicationResult run_replication(const SimConfig& cfg, std::uint64_t rep_index);

struct SimResult {
  std::map<EstimatorKind, double> rejection;
  std::map<EstimatorKind, int> failures;
  std::map<EstimatorKind, int> reps_effective;
  double mean_L = 0.0;
  int defaulted_bandwidths = 0;
  /// One entry per replication, in rep_index order.
  std::vector<ReplicationResult> replications;
};

/// Aggregates replications 1..reps. `threads` > 1 spreads replications over
/// OpenMP threads; the result does not depend on the thread count.
SimResult run_monte_carlo(const SimConfig& cfg, int threads = 1);

struct SweepPoint {
  double value = 0.0;
  SimResult result;
};

/// Parameters: rho, omega, n, K, gamma_het (alias gamma), sigma_L (alias
/// sigma-l). Throws UnknownParameter otherwise.
std::vector<SweepPoint> run_sweep(const SimConfig& base,
                                  const std::string& parameter,
                                  const std::vector<double>& values,
                                  int threads = 1);

/// Header `value,estimator,rejection,failures,mean_L`; one row per
/// (value, requested estimator).
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points,
                     const std::vector<EstimatorKind>& estimators);

}  // namespace dyadcov

#include "dyadcov/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>

#include <omp.h>

#include "dyadcov/bandwidth.hpp"
#include "dyadcov/error.hpp"
#include "dyadcov/estimators.hpp"
#include "dyadcov/jackknife.hpp"
#include "dyadcov/linalg.hpp"
#include "dyadcov/ols.hpp"

namespace dyadcov {

void validate(const SimConfig& cfg) {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::InvalidArgument, msg);
  };
  if (cfg.n < 3) fail("n must be at least 3");
  if (cfg.K < 1) fail("K must be at least 1");
  if (static_cast<long long>(cfg.n) * (cfg.n - 1) / 2 <= cfg.K)
    fail("n(n-1)/2 must exceed K");
  if (!(cfg.rho >= 0.0 && cfg.rho < 1.0)) fail("rho must lie in [0, 1)");
  if (!(cfg.omega >= 0.0)) fail("omega must be non-negative");
  if (!(cfg.gamma_het >= 0.0)) fail("gamma must be non-negative");
  if (cfg.reps < 1) fail("reps must be at least 1");
  if (!(cfg.level > 0.0 && cfg.level < 1.0)) fail("level must lie in (0, 1)");
  if (!(cfg.sigma_L > 0.0)) fail("sigma_L must be positive");
  if (cfg.estimators.empty()) fail("no estimators requested");
}

Matrix gen_ar1_nodes(int n, double rho, int dim, NormalStream& stream) {
  return gen_ar1_nodes(n, rho, dim, [&stream] { return stream.normal(); });
}

Matrix gen_ar1_nodes(int n, double rho, int dim,
                     const std::function<double()>& draw) {
  if (!(rho >= 0.0 && rho < 1.0))
    throw Error(ErrorCode::InvalidArgument, "rho must lie in [0, 1)");
  Matrix A(n, dim);
  const double innovation_scale = std::sqrt(1.0 - rho * rho);
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k < dim; ++k) {
      const double z = draw();
      A(r, k) = r == 0 ? z : rho * A(r - 1, k) + innovation_scale * z;
    }
  }
  return A;
}

SimSample gen_dyadic_sample(const SimConfig& cfg, NormalStream& stream) {
  const int n = cfg.n;
  const int K = cfg.K;
  const Matrix Ax = gen_ar1_nodes(n, cfg.rho, K, stream);
  const Matrix Au = gen_ar1_nodes(n, cfg.rho, 1, stream);

  auto dyads = complete_dyads(n);
  const auto M = static_cast<Eigen::Index>(dyads.size());
  Matrix X(M, K);
  Vector y(M);
  const Vector beta = Vector::Ones(K);
  for (Eigen::Index m = 0; m < M; ++m) {
    const int a = dyads[static_cast<std::size_t>(m)].i - 1;
    const int b = dyads[static_cast<std::size_t>(m)].j - 1;
    for (int k = 0; k < K; ++k)
      X(m, k) = cfg.omega * (Ax(a, k) + Ax(b, k)) + stream.normal();
    const double v = cfg.omega * (Au(a, 0) + Au(b, 0)) + stream.normal();
    const double u = (1.0 + cfg.gamma_het * std::abs(X(m, K - 1))) * v;
    y[m] = X.row(m).dot(beta) + u;
    X(m, 0) = 1.0;
  }
  return {make_ranked_dataset(n, std::move(dyads), std::move(y), std::move(X)),
          beta};
}

ReplicationResult evaluate_sample(const SimConfig& cfg, const SimSample& sample) {
  const auto& ds = sample.ds;
  const RegressionFit fit = fit_ols(ds);
  const auto sel = select_bandwidth(node_scores(fit.scores, ds.dyads, ds.n));

  ReplicationResult rep;
  rep.L = std::min(scaled_bandwidth(sel, cfg.sigma_L), ds.n - 1);
  rep.bandwidth_defaulted = sel.defaulted;

  const int K = ds.K();
  Vector contrast = Vector::Zero(K);
  contrast[K - 1] = 1.0;
  const double null_value = sample.beta_true[K - 1];
  const double critical = normal_critical_value(cfg.level);
  const EstimateOptions opts{cfg.psd_fix, Exec::serial};

  auto decide = [&](const Matrix& V) {
    try {
      const auto t = t_test(fit.beta, V, contrast, null_value);
      return std::abs(t.t) > critical ? TestOutcome::Reject : TestOutcome::Accept;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonpositiveVariance) return TestOutcome::Failure;
      throw;
    }
  };

  // Both jackknife kinds share one set of delete-block refits.
  std::optional<JackknifeResult> jk;
  for (auto kind : cfg.estimators) {
    TestOutcome outcome;
    if (kind == EstimatorKind::JK || kind == EstimatorKind::JKNoDC) {
      if (!jk) jk = jk_variance(ds, fit, rep.L, true, Exec::serial);
      Matrix V = kind == EstimatorKind::JK ? jk->V : jk->V0;
      if (cfg.psd_fix && min_eigenvalue(V) < 0.0) V = clip_negative_eigenvalues(V);
      outcome = decide(V);
    } else {
      try {
        outcome = decide(estimate_variance(kind, ds, fit, rep.L, opts).V);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateDof) throw;
        outcome = TestOutcome::Failure;
      }
    }
    rep.outcome[static_cast<std::size_t>(kind)] = outcome;
  }
  return rep;
}

ReplicationResult run_replication(const SimConfig& cfg, std::uint64_t rep_index) {
  auto stream = NormalStream::for_replication(cfg.seed, rep_index);
  return evaluate_sample(cfg, gen_dyadic_sample(cfg, stream));
}

SimResult run_monte_carlo(const SimConfig& cfg, int threads) {
  validate(cfg);
  SimResult out;
  out.replications.resize(static_cast<std::size_t>(cfg.reps));
  const int reps = cfg.reps;
  const int nthreads = std::max(1, threads);
#pragma omp parallel for schedule(dynamic) num_threads(nthreads) if (nthreads > 1)
  for (int r = 0; r < reps; ++r)
    out.replications[static_cast<std::size_t>(r)] =
        run_replication(cfg, static_cast<std::uint64_t>(r) + 1);

  double sum_L = 0.0;
  for (const auto& rep : out.replications) {
    sum_L += rep.L;
    out.defaulted_bandwidths += rep.bandwidth_defaulted;
  }
  out.mean_L = sum_L / reps;
  for (auto kind : cfg.estimators) {
    int rejects = 0, failures = 0;
    for (const auto& rep : out.replications) {
      rejects += rep[kind] == TestOutcome::Reject;
      failures += rep[kind] == TestOutcome::Failure;
    }
    const int effective = reps - failures;
    out.failures[kind] = failures;
    out.reps_effective[kind] = effective;
    out.rejection[kind] =
        effective > 0 ? static_cast<double>(rejects) / effective : 0.0;
  }
  return out;
}

namespace {

void apply_parameter(SimConfig& cfg, const std::string& name, double value) {
  auto as_count = [&](double v) {
    if (v != std::floor(v))
      throw Error(ErrorCode::InvalidArgument,
                  name + " takes integer values, got " + std::to_string(v));
    return static_cast<int>(v);
  };
  if (name == "rho") cfg.rho = value;
  else if (name == "omega") cfg.omega = value;
  else if (name == "n") cfg.n = as_count(value);
  else if (name == "K" || name == "k") cfg.K = as_count(value);
  else if (name == "gamma_het" || name == "gamma") cfg.gamma_het = value;
  else if (name == "sigma_L" || name == "sigma-l" || name == "sigma_l") cfg.sigma_L = value;
  else throw Error(ErrorCode::UnknownParameter, "cannot sweep '" + name + "'");
}

}  // namespace

std::vector<SweepPoint> run_sweep(const SimConfig& base,
                                  const std::string& parameter,
                                  const std::vector<double>& values,
                                  int threads) {
  static const std::vector<std::string> known = {
      "rho", "omega", "n", "K", "k", "gamma_het", "gamma", "sigma_L", "sigma-l", "sigma_l"};
  if (std::find(known.begin(), known.end(), parameter) == known.end())
    throw Error(ErrorCode::UnknownParameter, "cannot sweep '" + parameter + "'");
  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (double v : values) {
    SimConfig cfg = base;
    apply_parameter(cfg, parameter, v);
    points.push_back({v, run_monte_carlo(cfg, threads)});
  }
  return points;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points,
                     const std::vector<EstimatorKind>& estimators) {
  out << "value,estimator,rejection,failures,mean_L\n";
  char buf[64];
  for (const auto& p : points) {
    for (auto kind : estimators) {
      out << p.value << ',' << to_string(kind) << ',';
      std::snprintf(buf, sizeof buf, "%.6f", p.result.rejection.at(kind));
      out << buf << ',' << p.result.failures.at(kind) << ',';
      std::snprintf(buf, sizeof buf, "%.4f", p.result.mean_L);
      out << buf << '\n';
    }
  }
}

}  // namespace dyadcov

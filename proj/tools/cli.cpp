#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "dyadcov/bandwidth.hpp"
#include "dyadcov/csv.hpp"
#include "dyadcov/error.hpp"
#include "dyadcov/estimators.hpp"
#include "dyadcov/simulate.hpp"

namespace dyadcov::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kUsageError = 2;
constexpr const char* kSchema = "dyadcov/1";

struct DataOptions {
  std::string data;
  std::string order;
  bool fixed_effects = false;
  bool no_intercept = false;
};

struct FitOptions {
  DataOptions input;
  std::optional<int> bandwidth;
  double sigma_L = 1.0;
  std::string estimators = "all";
  std::vector<std::string> contrasts;
  double null_value = 0.0;
  double level = 0.05;
  bool psd_fix = false;
  std::string out;
  int threads = 1;
};

struct SimOptions {
  SimConfig cfg;
  std::string estimators = "all";
  std::string sweep;
  std::vector<double> values;
  std::string out;
  int threads = 1;
};

std::vector<EstimatorKind> parse_estimator_list(const std::string& spec) {
  if (spec == "all") return {kAllEstimators.begin(), kAllEstimators.end()};
  std::vector<EstimatorKind> kinds;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const auto kind = parse_estimator(token);
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) kinds.push_back(kind);
  }
  if (kinds.empty()) throw Error(ErrorCode::InvalidArgument, "no estimators requested");
  return kinds;
}

DyadicDataset load_dataset(const DataOptions& opt) {
  auto table = read_dyad_csv(opt.data);
  const auto order = read_order_csv(opt.order);
  std::vector<std::string> columns = table.regressors;
  if (!opt.no_intercept) {
    columns.insert(columns.begin(), "(intercept)");
    for (auto& row : table.rows) row.x.insert(row.x.begin(), 1.0);
  }
  if (columns.empty())
    throw Error(ErrorCode::InvalidArgument, "the model has no regressors");
  auto ds = build_dataset(table.rows, order, std::move(columns));
  return opt.fixed_effects ? expand_node_effects(ds) : ds;
}

int resolve_column(const DyadicDataset& ds, const std::string& token) {
  for (int k = 0; k < ds.K(); ++k)
    if (ds.columns[static_cast<std::size_t>(k)] == token) return k;
  int index = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), index);
  if (ec == std::errc() && ptr == token.data() + token.size() && index >= 1 &&
      index <= ds.K())
    return index - 1;
  throw Error(ErrorCode::InvalidArgument, "unknown contrast '" + token + "'");
}

ordered_json to_json(const Vector& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(v[k]);
  return arr;
}

ordered_json bandwidth_json(const BandwidthSelection& sel, int n) {
  ordered_json j;
  j["n"] = n;
  j["L"] = sel.L;
  j["h_max"] = sel.h_max;
  j["threshold"] = sel.threshold;
  j["rho_max"] = sel.rho_max;
  j["defaulted"] = sel.defaulted;
  return j;
}

void emit(const ordered_json& doc, const std::string& path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  file << text;
}

int cmd_fit(const FitOptions& opt, std::ostream& out, std::ostream& err) {
  omp_set_num_threads(std::max(1, opt.threads));
  const auto ds = load_dataset(opt.input);
  const auto kinds = parse_estimator_list(opt.estimators);
  if (opt.contrasts.empty())
    throw Error(ErrorCode::InvalidArgument, "at least one --contrast is required");
  std::vector<int> contrast_cols;
  for (const auto& c : opt.contrasts) contrast_cols.push_back(resolve_column(ds, c));
  if (!(opt.level > 0.0 && opt.level < 1.0))
    throw Error(ErrorCode::InvalidArgument, "--level must lie in (0, 1)");

  const auto fit = fit_ols(ds);
  const auto selection = select_bandwidth(node_scores(fit.scores, ds.dyads, ds.n));
  const int L = opt.bandwidth ? *opt.bandwidth : scaled_bandwidth(selection, opt.sigma_L);
  if (L < 1) throw Error(ErrorCode::InvalidArgument, "--bandwidth must be at least 1");

  ordered_json doc;
  doc["schema"] = kSchema;
  doc["dataset"] = {{"n", ds.n}, {"M", ds.M()}, {"K", ds.K()}, {"complete", ds.complete()}};
  doc["columns"] = ds.columns;
  doc["rank_deficient"] = fit.rank_deficient;
  auto bw = bandwidth_json(selection, ds.n);
  bw.erase("n");
  bw["source"] = opt.bandwidth ? "override" : "selected";
  bw["sigma_L"] = opt.sigma_L;
  bw["L_used"] = L;
  doc["bandwidth"] = bw;
  const double critical = normal_critical_value(opt.level);

  ordered_json estimators = ordered_json::array();
  const EstimateOptions est_opts{opt.psd_fix, Exec::parallel};
  for (auto kind : kinds) {
    ordered_json e;
    e["kind"] = std::string(to_string(kind));
    e["beta"] = to_json(fit.beta);
    try {
      const auto est = estimate_variance(kind, ds, fit, L, est_opts);
      if (est.bandwidth_clamped)
        err << "warning: " << to_string(kind) << ": bandwidth " << L
            << " >= n, clamped to " << *est.bandwidth << "\n";
      e["L"] = est.bandwidth ? ordered_json(*est.bandwidth) : ordered_json(nullptr);
      e["psd_fixed"] = est.psd_fixed;
      e["min_eigenvalue"] = est.min_eigenvalue;
      e["pseudo_inverse_count"] = est.pseudo_inverse_count;
      ordered_json tests = ordered_json::array();
      for (std::size_t c = 0; c < contrast_cols.size(); ++c) {
        ordered_json t;
        t["contrast"] = ds.columns[static_cast<std::size_t>(contrast_cols[c])];
        t["estimate"] = fit.beta[contrast_cols[c]];
        t["null"] = opt.null_value;
        Vector a = Vector::Zero(ds.K());
        a[contrast_cols[c]] = 1.0;
        try {
          const auto r = t_test(fit.beta, est.V, a, opt.null_value);
          t["se"] = r.se;
          t["t"] = r.t;
          t["p"] = r.p;
          t["reject"] = std::abs(r.t) > critical;
        } catch (const Error& ex) {
          if (ex.code() != ErrorCode::NonpositiveVariance) throw;
          t["error"] = std::string(to_string(ex.code()));
        }
        tests.push_back(std::move(t));
      }
      e["tests"] = std::move(tests);
    } catch (const Error& ex) {
      if (ex.code() != ErrorCode::BlockTooLong && ex.code() != ErrorCode::DegenerateDof)
        throw;
      e["error"] = std::string(to_string(ex.code()));
      e["message"] = ex.what();
    }
    estimators.push_back(std::move(e));
  }
  doc["estimators"] = std::move(estimators);
  emit(doc, opt.out, out);
  return 0;
}

int cmd_bandwidth(const FitOptions& opt, std::ostream& out) {
  const auto ds = load_dataset(opt.input);
  const auto fit = fit_ols(ds);
  const auto sel = select_bandwidth(node_scores(fit.scores, ds.dyads, ds.n));
  ordered_json doc;
  doc["schema"] = kSchema;
  doc.update(bandwidth_json(sel, ds.n));
  emit(doc, opt.out, out);
  return 0;
}

int cmd_simulate(SimOptions opt, std::ostream& out) {
  opt.cfg.estimators = parse_estimator_list(opt.estimators);
  if (opt.sweep.empty() != opt.values.empty())
    throw Error(ErrorCode::InvalidArgument, "--sweep and --values go together");
  if (opt.threads < 1) throw Error(ErrorCode::InvalidArgument, "--threads must be >= 1");
  validate(opt.cfg);

  std::vector<SweepPoint> points;
  if (opt.sweep.empty()) {
    points.push_back({opt.cfg.rho, run_monte_carlo(opt.cfg, opt.threads)});
  } else {
    points = run_sweep(opt.cfg, opt.sweep, opt.values, opt.threads);
  }

  std::ostringstream csv;
  write_sweep_csv(csv, points, opt.cfg.estimators);
  if (opt.out.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(opt.out, std::ios::binary);
    if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write '" + opt.out + "'");
    file << csv.str();
  }
  return 0;
}

void add_data_flags(CLI::App& cmd, FitOptions& opt) {
  cmd.add_option("--data", opt.input.data, "Dyad CSV (node_i,node_j,y,x1,...)")->required();
  cmd.add_option("--order", opt.input.order, "Ordering CSV (node,order_value)")->required();
  cmd.add_flag("--fixed-effects", opt.input.fixed_effects, "Add node indicator columns");
  cmd.add_flag("--no-intercept", opt.input.no_intercept, "Do not prepend an intercept");
  cmd.add_option("--out", opt.out, "Write JSON here instead of stdout");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dyadic regression inference under ordered-node dependence", "dyadcov"};
  app.require_subcommand(1);

  FitOptions fit_opt;
  auto* fit = app.add_subcommand("fit", "Fit OLS and report variance estimators");
  add_data_flags(*fit, fit_opt);
  fit->add_option("--bandwidth", fit_opt.bandwidth, "Use this bandwidth instead of selecting one");
  fit->add_option("--sigma-l", fit_opt.sigma_L, "Scale the selected bandwidth");
  fit->add_option("--estimators", fit_opt.estimators, "Comma list of estimators, or 'all'");
  fit->add_option("--contrast", fit_opt.contrasts, "Regressor name or 1-based column index")
      ->take_all();
  fit->add_option("--null", fit_opt.null_value, "Null value for every contrast");
  fit->add_option("--level", fit_opt.level, "Nominal test level");
  fit->add_flag("--psd-fix", fit_opt.psd_fix, "Clip negative meat eigenvalues");
  fit->add_option("--threads", fit_opt.threads, "OpenMP threads for the kernels");
  fit->add_option("--seed", "Accepted for interface symmetry; fit is deterministic");

  FitOptions bw_opt;
  auto* bw = app.add_subcommand("bandwidth", "Report the data-driven bandwidth");
  add_data_flags(*bw, bw_opt);

  SimOptions sim_opt;
  auto& cfg = sim_opt.cfg;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo rejection frequencies");
  sim->add_option("--n", cfg.n, "Nodes");
  sim->add_option("--k", cfg.K, "Regressors (including the intercept)");
  sim->add_option("--rho", cfg.rho, "Ordered-node AR(1) coefficient");
  sim->add_option("--omega", cfg.omega, "Node-component loading");
  sim->add_option("--gamma", cfg.gamma_het, "Heteroskedasticity scale");
  sim->add_option("--reps", cfg.reps, "Replications");
  sim->add_option("--seed", cfg.seed, "Master seed");
  sim->add_option("--level", cfg.level, "Nominal test level");
  sim->add_option("--sigma-l", cfg.sigma_L, "Bandwidth scale");
  sim->add_flag("--psd-fix", cfg.psd_fix, "Clip negative meat eigenvalues");
  sim->add_option("--estimators", sim_opt.estimators, "Comma list of estimators, or 'all'");
  sim->add_option("--sweep", sim_opt.sweep, "rho, omega, n, K, gamma_het or sigma_L");
  sim->add_option("--values", sim_opt.values, "Comma-separated sweep values")->delimiter(',');
  sim->add_option("--out", sim_opt.out, "Write CSV here instead of stdout");
  sim->add_option("--threads", sim_opt.threads, "Replication threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (fit->parsed()) return cmd_fit(fit_opt, out, err);
    if (bw->parsed()) return cmd_bandwidth(bw_opt, out);
    if (sim->parsed()) return cmd_simulate(sim_opt, out);
  } catch (const Error& e) {
    err << "dyadcov: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace dyadcov::cli

#include "dyadcov/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "dyadcov/error.hpp"

namespace dyadcov {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateDyad: return "DuplicateDyad";
    case ErrorCode::RaggedRegressors: return "RaggedRegressors";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DegenerateDof: return "DegenerateDof";
    case ErrorCode::NonpositiveVariance: return "NonpositiveVariance";
    case ErrorCode::BlockTooLong: return "BlockTooLong";
    case ErrorCode::UnknownParameter: return "UnknownParameter";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

NodeOrder::NodeOrder(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  rank_.reserve(labels_.size());
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    if (!rank_.emplace(labels_[r], static_cast<int>(r) + 1).second)
      throw Error(ErrorCode::DuplicateLabel,
                  "node label '" + labels_[r] + "' appears twice");
  }
}

int NodeOrder::rank_of(const std::string& label) const {
  auto it = rank_.find(label);
  if (it == rank_.end())
    throw Error(ErrorCode::UnknownLabel,
                "node label '" + label + "' is not in the ordering");
  return it->second;
}

bool NodeOrder::contains(const std::string& label) const {
  return rank_.contains(label);
}

DyadIndex::DyadIndex(std::span<const Dyad> dyads, int n)
    : n_(n), index_(static_cast<std::size_t>(n) * n, -1) {
  for (std::size_t m = 0; m < dyads.size(); ++m) {
    const auto& d = dyads[m];
    index_[(d.i - 1) * n_ + (d.j - 1)] = static_cast<int>(m);
    index_[(d.j - 1) * n_ + (d.i - 1)] = static_cast<int>(m);
  }
}

std::vector<Dyad> complete_dyads(int n) {
  std::vector<Dyad> out;
  out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) out.push_back({i, j});
  return out;
}

namespace {

std::vector<std::string> default_columns(int K) {
  std::vector<std::string> names;
  for (int k = 1; k <= K; ++k) names.push_back("x" + std::to_string(k));
  return names;
}

// Canonicalizes in place and rejects self loops, out-of-range ranks and
// repeated pairs.
void validate_dyads(std::vector<Dyad>& dyads, int n) {
  std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
  for (std::size_t m = 0; m < dyads.size(); ++m) {
    auto& d = dyads[m];
    if (d.i == d.j)
      throw Error(ErrorCode::SelfLoop,
                  "row " + std::to_string(m + 1) + " is a self loop");
    if (d.i > d.j) std::swap(d.i, d.j);
    if (d.i < 1 || d.j > n)
      throw Error(ErrorCode::UnknownLabel,
                  "row " + std::to_string(m + 1) + " references a rank outside 1.." +
                      std::to_string(n));
    auto& flag = seen[(d.i - 1) * n + (d.j - 1)];
    if (flag)
      throw Error(ErrorCode::DuplicateDyad,
                  "row " + std::to_string(m + 1) + " repeats the pair (" +
                      std::to_string(d.i) + "," + std::to_string(d.j) + ")");
    flag = 1;
  }
}

}  // namespace

DyadicDataset build_dataset(std::span<const DyadRow> rows,
                            std::span<const OrderEntry> ordering,
                            std::vector<std::string> columns) {
  if (rows.empty()) throw Error(ErrorCode::EmptyDataset, "no dyad rows");

  std::vector<std::size_t> perm(ordering.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    if (ordering[a].value != ordering[b].value)
      return ordering[a].value < ordering[b].value;
    return ordering[a].label < ordering[b].label;
  });
  std::vector<std::string> labels;
  labels.reserve(perm.size());
  for (auto p : perm) labels.push_back(ordering[p].label);

  DyadicDataset ds;
  ds.order = NodeOrder(std::move(labels));
  ds.n = ds.order.size();

  const std::size_t K = rows.front().x.size();
  if (columns.empty()) columns = default_columns(static_cast<int>(K));
  if (columns.size() != K)
    throw Error(ErrorCode::RaggedRegressors,
                "column name count does not match regressor count");

  ds.dyads.reserve(rows.size());
  ds.y.resize(static_cast<Eigen::Index>(rows.size()));
  ds.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(K));
  for (std::size_t m = 0; m < rows.size(); ++m) {
    const auto& row = rows[m];
    if (row.label_i == row.label_j)
      throw Error(ErrorCode::SelfLoop,
                  "row " + std::to_string(m + 1) + " links '" + row.label_i +
                      "' to itself");
    if (row.x.size() != K)
      throw Error(ErrorCode::RaggedRegressors,
                  "row " + std::to_string(m + 1) + " has " +
                      std::to_string(row.x.size()) + " regressors, expected " +
                      std::to_string(K));
    ds.dyads.push_back({ds.order.rank_of(row.label_i),
                        ds.order.rank_of(row.label_j)});
    ds.y[static_cast<Eigen::Index>(m)] = row.y;
    for (std::size_t k = 0; k < K; ++k)
      ds.X(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) = row.x[k];
  }
  validate_dyads(ds.dyads, ds.n);
  ds.columns = std::move(columns);
  return ds;
}

DyadicDataset make_ranked_dataset(int n, std::vector<Dyad> dyads, Vector y,
                                  Matrix X, std::vector<std::string> columns) {
  if (dyads.empty()) throw Error(ErrorCode::EmptyDataset, "no dyads");
  if (y.size() != static_cast<Eigen::Index>(dyads.size()) ||
      X.rows() != static_cast<Eigen::Index>(dyads.size()))
    throw Error(ErrorCode::RaggedRegressors, "y/X row count mismatch");
  validate_dyads(dyads, n);

  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int r = 1; r <= n; ++r) labels.push_back(std::to_string(r));

  DyadicDataset ds;
  ds.n = n;
  ds.order = NodeOrder(std::move(labels));
  ds.dyads = std::move(dyads);
  ds.y = std::move(y);
  ds.X = std::move(X);
  ds.columns = columns.empty() ? default_columns(ds.K()) : std::move(columns);
  if (static_cast<int>(ds.columns.size()) != ds.K())
    throw Error(ErrorCode::RaggedRegressors,
                "column name count does not match regressor count");
  return ds;
}

DyadicDataset expand_node_effects(const DyadicDataset& ds) {
  if (ds.n < 2)
    throw Error(ErrorCode::InvalidArgument,
                "node effects need at least two nodes");
  const int K0 = ds.K();
  DyadicDataset out = ds;
  out.X = Matrix::Zero(ds.X.rows(), K0 + ds.n - 1);
  out.X.leftCols(K0) = ds.X;
  // Node r (r >= 2) owns column K0 + r - 2.
  for (std::size_t m = 0; m < ds.M(); ++m) {
    const auto& d = ds.dyads[m];
    const auto row = static_cast<Eigen::Index>(m);
    if (d.i >= 2) out.X(row, K0 + d.i - 2) = 1.0;
    if (d.j >= 2) out.X(row, K0 + d.j - 2) = 1.0;
  }
  for (int r = 2; r <= ds.n; ++r)
    out.columns.push_back("fe:" + ds.order.label_of(r));
  return out;
}

}  // namespace dyadcov

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dyadcov/types.hpp"

namespace dyadcov {

/// An unordered node pair stored canonically (1 <= i < j <= n), using node
/// ranks rather than external labels.
struct Dyad {
  int i = 0;
  int j = 0;

  friend bool operator==(const Dyad&, const Dyad&) = default;
};

/// Bijection between external node labels and ranks 1..n.
class NodeOrder {
 public:
  NodeOrder() = default;
  /// `labels[r - 1]` receives rank r.
  explicit NodeOrder(std::vector<std::string> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  int rank_of(const std::string& label) const;  // throws UnknownLabel
  bool contains(const std::string& label) const;
  const std::string& label_of(int rank) const { return labels_.at(rank - 1); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> rank_;
};

struct DyadicDataset {
  int n = 0;
  std::vector<Dyad> dyads;
  Vector y;
  Matrix X;
  NodeOrder order;
  std::vector<std::string> columns;

  std::size_t M() const { return dyads.size(); }
  int K() const { return static_cast<int>(X.cols()); }
  bool complete() const {
    return M() == static_cast<std::size_t>(n) * (n - 1) / 2;
  }
};

struct DyadRow {
  std::string label_i;
  std::string label_j;
  double y = 0.0;
  std::vector<double> x;
};

struct OrderEntry {
  std::string label;
  double value = 0.0;
};

/// Ranks nodes by ascending order value (ties broken by label), maps every
/// row onto canonical rank pairs and assembles y and X.
///
/// Errors: UnknownLabel, DuplicateLabel, SelfLoop, DuplicateDyad,
/// RaggedRegressors, EmptyDataset (no rows).
DyadicDataset build_dataset(std::span<const DyadRow> rows,
                            std::span<const OrderEntry> ordering,
                            std::vector<std::string> columns = {});

/// Assembles a dataset whose node labels are the ranks themselves
/// ("1".."n"). Dyads are canonicalized and validated as in build_dataset.
DyadicDataset make_ranked_dataset(int n, std::vector<Dyad> dyads, Vector y,
                                  Matrix X,
                                  std::vector<std::string> columns = {});

/// All n(n-1)/2 dyads in lexicographic order.
std::vector<Dyad> complete_dyads(int n);

/// Appends n-1 node indicator columns (the rank-1 node is dropped). A dyad's
/// row gets a 1 in the column of each of its retained endpoints.
DyadicDataset expand_node_effects(const DyadicDataset& ds);

/// Dense n x n lookup from a node pair to its row in `dyads` (or -1).
class DyadIndex {
 public:
  DyadIndex(std::span<const Dyad> dyads, int n);
  int operator()(int a, int b) const { return index_[(a - 1) * n_ + (b - 1)]; }

 private:
  int n_;
  std::vector<int> index_;
};

}  // namespace dyadcov

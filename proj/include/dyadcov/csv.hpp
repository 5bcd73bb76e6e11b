#pragma once

#include <istream>
#include <string>
#include <vector>

#include "dyadcov/dataset.hpp"

namespace dyadcov {

struct DyadTable {
  std::vector<std::string> regressors;  // header tokens after y
  std::vector<DyadRow> rows;
};

/// Header `node_i,node_j,y,x1,...,xK`. Malformed rows raise Parse errors
/// that name the source and line.
DyadTable read_dyad_csv(std::istream& in, const std::string& source = "<input>");
DyadTable read_dyad_csv(const std::string& path);

/// Header `node,order_value`.
std::vector<OrderEntry> read_order_csv(std::istream& in,
                                       const std::string& source = "<input>");
std::vector<OrderEntry> read_order_csv(const std::string& path);

}  // namespace dyadcov

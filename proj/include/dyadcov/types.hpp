#pragma once

#include <Eigen/Dense>

namespace dyadcov {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Selects between the OpenMP kernels and the single-threaded path. Both
/// produce bitwise-identical results; the serial path is the reference used
/// by the tests and the one the Monte Carlo driver runs inside each
/// replication.
enum class Exec { serial, parallel };

}  // namespace dyadcov

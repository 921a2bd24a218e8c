#pragma once

#include <Eigen/Core>

namespace mms::lp {

struct CoveringSolution {
  Eigen::VectorXd x;     // primal solution
  Eigen::VectorXd dual;  // one multiplier per covering row
  double objective = 0.0;
  bool optimal = false;
  bool infeasible = false;
  int pivots = 0;
};

/// Solves min c^T x s.t. A x >= 1, x >= 0 for c > 0, A >= 0 by the dual
/// simplex method on an m-row tableau (slack basis is dual feasible).
/// Smallest-index pivoting (Bland) keeps the pivot sequence deterministic.
CoveringSolution solve_covering(const Eigen::MatrixXd& A, const Eigen::VectorXd& c, int max_pivots = 1'000'000);

}  // namespace mms::lp

#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <string>

namespace mms::ipm {

/// min sum_k mu_k x_k^p over the leading mu.size() coordinates of x,
/// subject to the sparse linear inequalities G x <= h. Remaining
/// coordinates carry no cost.
struct Problem {
  Eigen::SparseMatrix<double> G;
  Eigen::VectorXd h;
  Eigen::VectorXd mu;
  double p = 2.0;
};

struct Options {
  int max_iterations = 300;
  /// Bound on the KKT merit max(dual residual relative to the gradient,
  /// complementarity s.z relative to the objective).
  double tolerance = 1e-9;
};

struct Solution {
  Eigen::VectorXd x;
  Eigen::VectorXd s;  // slacks h - G x
  Eigen::VectorXd z;  // multipliers
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  double gap = 0.0;
  std::string note;
};

/// Primal-dual interior point method with Mehrotra predictor-corrector
/// steps from a strictly feasible x0 (throws Precondition otherwise).
/// Returns the iterate with the smallest KKT merit; stops early once the
/// merit stalls, which happens when the normal equations lose accuracy.
Solution solve(const Problem& problem, Eigen::VectorXd x0, const Options& opts = {});

}  // namespace mms::ipm

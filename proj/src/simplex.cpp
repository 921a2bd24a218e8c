#include "mms/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace mms::lp {

CoveringSolution solve_covering(const Eigen::MatrixXd& A, const Eigen::VectorXd& c, int max_pivots) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  CoveringSolution out;
  out.x = Eigen::VectorXd::Zero(n);
  out.dual = Eigen::VectorXd::Zero(m);
  if (m == 0) {
    out.optimal = true;
    return out;
  }
  // Columns 0..n-1 structural, n..n+m-1 slacks. Row i reads
  // -A_i x + s_i = -1 so the slack basis has rhs -1 (primal infeasible)
  // and reduced costs c >= 0 (dual feasible).
  const Eigen::Index cols = n + m;
  Eigen::MatrixXd T(m, cols);
  T.leftCols(n) = -A;
  T.rightCols(m).setIdentity();
  Eigen::VectorXd rhs = Eigen::VectorXd::Constant(m, -1.0);
  Eigen::VectorXd reduced(cols);
  reduced.head(n) = c;
  reduced.tail(m).setZero();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;

  const double eps = 1e-12;
  while (out.pivots < max_pivots) {
    // leaving row: smallest basic index among negative rhs
    Eigen::Index leave = -1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (rhs[i] < -eps && (leave < 0 || basis[i] < basis[leave])) leave = i;
    }
    if (leave < 0) {
      out.optimal = true;
      break;
    }
    // entering column: minimum ratio reduced_j / -T_lj over T_lj < 0
    Eigen::Index enter = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double a = T(leave, j);
      if (a < -eps) {
        const double ratio = reduced[j] / -a;
        if (enter < 0 || ratio < best - 1e-14 * std::max(1.0, std::abs(best))) {
          best = ratio;
          enter = j;
        }
      }
    }
    if (enter < 0) {
      out.infeasible = true;
      break;
    }
    const double piv = T(leave, enter);
    T.row(leave) /= piv;
    rhs[leave] /= piv;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = T(i, enter);
      if (f != 0.0) {
        T.row(i) -= f * T.row(leave);
        rhs[i] -= f * rhs[leave];
      }
    }
    const double f = reduced[enter];
    if (f != 0.0) reduced -= f * T.row(leave).transpose();
    basis[leave] = enter;
    ++out.pivots;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < n) out.x[basis[i]] = std::max(0.0, rhs[i]);
  }
  // multipliers of the covering rows are the reduced costs of the slacks
  for (Eigen::Index i = 0; i < m; ++i) out.dual[i] = std::max(0.0, reduced[n + i]);
  out.objective = c.dot(out.x);
  return out;
}

}  // namespace mms::lp

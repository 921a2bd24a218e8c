#include "mms/interior_point.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mms/error.hpp"

namespace mms::ipm {

namespace {

double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double a = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
  return a;
}

}  // namespace

Solution solve(const Problem& pr, Eigen::VectorXd x, const Options& opts) {
  const Eigen::SparseMatrix<double>& G = pr.G;
  const Eigen::Index m = G.rows();
  const Eigen::Index N = G.cols();
  const Eigen::Index nw = pr.mu.size();
  const double p = pr.p;
  if (x.size() != N || nw > N || pr.h.size() != m) throw Error(ErrorKind::InvalidInput, "interior point dimensions disagree");
  const Eigen::SparseMatrix<double> Gt = G.transpose();

  auto objective = [&](const Eigen::VectorXd& xx) { return (pr.mu.array() * xx.head(nw).array().pow(p)).sum(); };

  Solution out;
  Eigen::VectorXd s = pr.h - G * x;
  if (m > 0 && s.minCoeff() <= 0.0) throw Error(ErrorKind::Precondition, "interior point start is not strictly feasible");
  const double f0 = objective(x);
  Eigen::VectorXd z = (std::max(f0, 1e-300) / std::max<Eigen::Index>(m, 1)) * s.cwiseInverse();

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool analysed = false;
  // best iterate by the KKT merit max(dual residual, relative gap)
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd bx = x, bs = s, bz = z;
  double b_res = 0.0, b_gap = 0.0;
  int since_best = 0;
  for (int it = 0;; ++it) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(N);
    grad.head(nw) = p * (pr.mu.array() * x.head(nw).array().pow(p - 1.0)).matrix();
    const Eigen::VectorXd rd = grad + Gt * z;
    const double fx = objective(x);
    const double gap = s.dot(z);
    const double res = rd.lpNorm<Eigen::Infinity>() / (1.0 + grad.lpNorm<Eigen::Infinity>());
    const double merit = std::max(res, gap / std::max(fx, 1e-300));
    if (merit < best) {
      best = merit;
      bx = x;
      bs = s;
      bz = z;
      b_res = res;
      b_gap = gap;
      since_best = 0;
    } else if (gap <= 1e-6 * std::max(fx, 1e-300)) {
      ++since_best;
    }
    if (best <= opts.tolerance) {
      out.converged = true;
      break;
    }
    if (since_best >= 4) {
      out.note = "interior point stalled at KKT merit " + std::to_string(best);
      break;
    }
    if (it >= opts.max_iterations) {
      out.note = "interior point iteration cap reached";
      break;
    }
    ++out.iterations;

    const Eigen::VectorXd w = z.cwiseQuotient(s);
    Eigen::SparseMatrix<double> H = Gt * w.asDiagonal() * G;
    for (Eigen::Index k = 0; k < N; ++k) {
      double d = 1e-14 * (1.0 + H.coeff(k, k));
      if (k < nw && p > 1.0) d += p * (p - 1.0) * pr.mu[k] * std::pow(x[k], p - 2.0);
      H.coeffRef(k, k) += d;
    }
    if (!analysed) {
      ldlt.analyzePattern(H);
      analysed = true;
    }
    ldlt.factorize(H);
    if (ldlt.info() != Eigen::Success) {
      out.note = "interior point factorisation failed";
      break;
    }

    auto direction = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& dx, Eigen::VectorXd& ds, Eigen::VectorXd& dz) {
      const Eigen::VectorXd rhs = -rd - Gt * rc.cwiseQuotient(s);
      dx = ldlt.solve(rhs);
      dx += ldlt.solve(rhs - H * dx);
      ds = -(G * dx);
      dz = (rc - z.cwiseProduct(ds)).cwiseQuotient(s);
    };

    Eigen::VectorXd dx, ds, dz;
    const Eigen::VectorXd sz = s.cwiseProduct(z);
    direction(-sz, dx, ds, dz);
    const double aff = std::min(max_step(s, ds), max_step(z, dz));
    const double mu_now = gap / static_cast<double>(m);
    const double mu_aff = (s + aff * ds).dot(z + aff * dz) / static_cast<double>(m);
    const double sigma = std::pow(std::clamp(mu_aff / mu_now, 0.0, 1.0), 3.0);
    const Eigen::VectorXd rc = -sz - ds.cwiseProduct(dz) + Eigen::VectorXd::Constant(m, sigma * mu_now);
    direction(rc, dx, ds, dz);
    if (!dx.allFinite() || !dz.allFinite()) {
      out.note = "interior point step is not finite";
      break;
    }
    const double alpha = std::min(1.0, 0.99 * std::min(max_step(s, ds), max_step(z, dz)));
    // slacks follow their own update; recomputing h - G x loses them to cancellation
    x += alpha * dx;
    s += alpha * ds;
    z += alpha * dz;
  }
  out.x = std::move(bx);
  out.s = std::move(bs);
  out.z = std::move(bz);
  out.residual = b_res;
  out.gap = b_gap;
  return out;
}

}  // namespace mms::ipm

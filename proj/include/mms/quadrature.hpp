#pragma once

#include <cmath>
#include <cstddef>

#include "mms/error.hpp"

namespace mms::quad {

struct SimpsonResult {
  double value = 0.0;
  bool converged = true;
  std::size_t evaluations = 0;
};

namespace detail {

template <typename F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth, SimpsonResult& out) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  out.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (!std::isfinite(delta)) {
    out.converged = false;
    return left + right;
  }
  if (depth <= 0) {
    out.converged = out.converged && std::abs(delta) <= 15.0 * tol;
    return left + right + delta / 15.0;
  }
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

/// Adaptive Simpson quadrature on [a, b] with absolute tolerance `tol`.
/// The interval is pre-split into `pieces` equal panels so that
/// integrands spanning several decades are resolved uniformly.
template <typename F>
SimpsonResult adaptive_simpson(F&& f, double a, double b, double tol = 1e-10,
                               int pieces = 16, int max_depth = 40) {
  SimpsonResult out;
  if (b == a) return out;
  const double h = (b - a) / pieces;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + k * h;
    const double hi = (k + 1 == pieces) ? b : a + (k + 1) * h;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    out.evaluations += 3;
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    out.value += detail::simpson_step(f, lo, hi, flo, fm, fhi, whole, tol / pieces,
                                      max_depth, out);
  }
  if (!std::isfinite(out.value)) out.converged = false;
  return out;
}

/// Adaptive Simpson on a logarithmic grid: integrates f over [a, b] with
/// a > 0 via the substitution t = e^s, which keeps power-law integrands
/// well conditioned over many dyadic scales.
template <typename F>
SimpsonResult log_simpson(F&& f, double a, double b, double tol = 1e-10, int pieces = 16) {
  auto g = [&f](double s) {
    const double t = std::exp(s);
    return f(t) * t;
  };
  return adaptive_simpson(g, std::log(a), std::log(b), tol, pieces);
}

/// Tensor-product midpoint rule on [x0, x1] x [y0, y1] with n x n cells.
template <typename F>
double midpoint_2d(F&& f, double x0, double x1, double y0, double y1, int n) {
  const double hx = (x1 - x0) / n;
  const double hy = (y1 - y0) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = x0 + (i + 0.5) * hx;
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += f(x, y0 + (j + 0.5) * hy);
    sum += row;
  }
  return sum * hx * hy;
}

}  // namespace mms::quad

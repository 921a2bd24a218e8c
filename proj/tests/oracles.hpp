#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's solvers: graphs are read through the public accessors only.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "mms/graph.hpp"

namespace oracle {

using mms::Index;
using mms::Path;

// Uniform double in [0, 1) from the top 53 bits; keeps sequences identical
// across standard libraries.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1));
}

// Connected graph: random spanning tree plus `extra` chords, lengths and
// masses uniform in [0.5, 2].
inline mms::SpaceGraph random_connected_graph(std::mt19937_64& rng, int n, int extra) {
  std::vector<mms::Edge> edges;
  auto has = [&](Index a, Index b) {
    for (const auto& e : edges)
      if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) return true;
    return false;
  };
  for (int v = 1; v < n; ++v) edges.push_back({uniform_int(rng, 0, v - 1), v, uniform(rng, 0.5, 2.0)});
  for (int tries = 0, added = 0; added < extra && tries < 100 * extra; ++tries) {
    const int a = uniform_int(rng, 0, n - 1), b = uniform_int(rng, 0, n - 1);
    if (a == b || has(a, b)) continue;
    edges.push_back({a, b, uniform(rng, 0.5, 2.0)});
    ++added;
  }
  mms::NodeField masses(n);
  for (int v = 0; v < n; ++v) masses[v] = uniform(rng, 0.5, 2.0);
  return mms::SpaceGraph(masses, edges, 0);
}

// Every simple path from a node of E to a node of F (depth-first).
inline std::vector<Path> simple_paths(const mms::SpaceGraph& g, const std::vector<Index>& E,
                                      const std::vector<Index>& F) {
  std::vector<char> inF(g.size(), 0), on(g.size(), 0);
  for (Index f : F) inF[f] = 1;
  std::vector<Path> out;
  Path cur;
  std::function<void(Index)> dfs = [&](Index v) {
    cur.push_back(v);
    on[v] = 1;
    if (inF[v]) {
      out.push_back(cur);
    } else {
      for (const auto& nb : g.neighbors(v))
        if (!on[nb.node]) dfs(nb.node);
    }
    on[v] = 0;
    cur.pop_back();
  };
  for (Index e : E) dfs(e);
  return out;
}

// Row of the trapezoid line-integral map: (A rho) = sum_e len (rho_u + rho_v) / 2.
inline Eigen::VectorXd usage(const mms::SpaceGraph& g, const Path& path) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(g.size());
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double len = *g.edge_length(path[i], path[i + 1]);
    a[path[i]] += 0.5 * len;
    a[path[i + 1]] += 0.5 * len;
  }
  return a;
}

struct BarrierResult {
  double value = 0.0;
  Eigen::VectorXd rho;
  double gap = 0.0;  // duality-gap bound (constraints + variables) / t
};

// min sum m_v rho_v^p subject to A rho >= 1, rho >= 0, by a primal
// log-barrier path-following Newton method on the dense problem.
inline BarrierResult barrier_modulus(const mms::SpaceGraph& g, const std::vector<Path>& paths, double p,
                                     double t_final = 1e12) {
  const Index n = g.size();
  const Index m = static_cast<Index>(paths.size());
  Eigen::MatrixXd A(m, n);
  for (Index i = 0; i < m; ++i) A.row(i) = usage(g, paths[i]).transpose();
  const Eigen::VectorXd mass = g.masses();

  Eigen::VectorXd rho = Eigen::VectorXd::Constant(n, 2.0 / A.rowwise().sum().minCoeff());
  auto phi = [&](const Eigen::VectorXd& x, double t) {
    const Eigen::VectorXd s = A * x - Eigen::VectorXd::Ones(m);
    if (s.minCoeff() <= 0.0 || x.minCoeff() <= 0.0) return std::numeric_limits<double>::infinity();
    double f = 0.0;
    for (Index v = 0; v < n; ++v) f += mass[v] * std::pow(x[v], p);
    return t * f - s.array().log().sum() - x.array().log().sum();
  };
  for (double t = 1.0; t <= t_final; t *= 8.0) {
    for (int it = 0; it < 200; ++it) {
      const Eigen::VectorXd s = A * rho - Eigen::VectorXd::Ones(m);
      const Eigen::VectorXd is = s.cwiseInverse();
      Eigen::VectorXd grad(n);
      Eigen::MatrixXd H = A.transpose() * is.cwiseAbs2().asDiagonal() * A;
      for (Index v = 0; v < n; ++v) {
        grad[v] = t * mass[v] * p * std::pow(rho[v], p - 1.0) - 1.0 / rho[v];
        H(v, v) += 1.0 / (rho[v] * rho[v]);
        if (p > 1.0) H(v, v) += t * mass[v] * p * (p - 1.0) * std::pow(rho[v], p - 2.0);
      }
      grad -= A.transpose() * is;
      const Eigen::VectorXd step = -H.ldlt().solve(grad);
      const double decrement = -grad.dot(step);
      if (decrement < 1e-12) break;
      double a = 1.0;
      const double base = phi(rho, t);
      while (a > 1e-14 && !(phi(rho + a * step, t) <= base - 0.25 * a * decrement)) a *= 0.5;
      rho += a * step;
    }
  }
  BarrierResult r;
  r.rho = rho;
  for (Index v = 0; v < n; ++v) r.value += mass[v] * std::pow(rho[v], p);
  r.gap = static_cast<double>(m + n) / t_final;
  return r;
}

// Path-graph closed form: one path with usage weights a_v over node masses
// mu_v has modulus (sum a^q mu^{1-q})^{1-p}, q = p/(p-1); 1 / max(a/mu) at p = 1.
inline double single_path_modulus(const std::vector<double>& a, const std::vector<double>& mu, double p) {
  if (p == 1.0) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, a[i] / mu[i]);
    return 1.0 / best;
  }
  const double q = p / (p - 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0.0) s += std::pow(a[i], q) * std::pow(mu[i], 1.0 - q);
  return std::pow(s, 1.0 - p);
}

// Radial p-capacity of the annulus r0 < r < r1 with shell density sigma(r):
// (int sigma^{1/(1-p)} dr)^{1-p}, by composite Simpson in log r.
inline double radial_capacity(const std::function<double(double)>& sigma, double p, double r0, double r1,
                              int panels = 4096) {
  const double a = std::log(r0), b = std::log(r1), h = (b - a) / panels;
  auto f = [&](double u) {
    const double r = std::exp(u);
    return std::pow(sigma(r), 1.0 / (1.0 - p)) * r;
  };
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return std::pow(s * h / 3.0, 1.0 - p);
}

}  // namespace oracle

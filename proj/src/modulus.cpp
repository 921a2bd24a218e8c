#include "mms/modulus.hpp"

#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "mms/error.hpp"
#include "mms/growth.hpp"
#include "mms/interior_point.hpp"
#include "mms/simplex.hpp"

namespace mms {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// cap on the weighted paths peeled off a condenser flow
constexpr std::size_t kMaxDecomposition = 500'000;

struct Term {
  int col;
  double coef;
};
using Row = std::vector<Term>;

std::string describe(std::span<const Index> path) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < path.size(); ++i) os << (i ? "," : "") << path[i];
  os << ']';
  return os.str();
}

// aggregated trapezoid coefficients of a walk, keyed by global node
std::map<Index, double> path_coefficients(const SpaceGraph& g, std::span<const Index> path) {
  if (path.empty()) throw Error(ErrorKind::MalformedPath, "empty path");
  std::map<Index, double> coef;
  for (Index v : path) {
    if (v < 0 || v >= g.size()) throw Error(ErrorKind::MalformedPath, "node out of range in path " + describe(path));
  }
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto len = g.edge_length(path[i - 1], path[i]);
    if (!len) throw Error(ErrorKind::MalformedPath, "non-adjacent consecutive nodes in path " + describe(path));
    coef[path[i - 1]] += 0.5 * *len;
    coef[path[i]] += 0.5 * *len;
  }
  return coef;
}

// Constraint rows over a compact set of touched nodes.
class ActiveSet {
 public:
  ActiveSet(const SpaceGraph& g, const std::vector<char>& support) : g_(g), support_(support) {
    local_.assign(static_cast<std::size_t>(g.size()), -1);
  }

  bool contains(const Path& p) const { return seen_.count(p) > 0; }

  // false when the path has no supported node to charge
  bool add(const Path& path) {
    Row row;
    for (const auto& [v, c] : path_coefficients(g_, path)) {
      if (!support_[v]) continue;
      if (local_[v] < 0) {
        local_[v] = static_cast<int>(nodes_.size());
        nodes_.push_back(v);
        node_rows_.emplace_back();
      }
      row.push_back({local_[v], c});
    }
    if (row.empty()) return false;
    const int r = static_cast<int>(rows_.size());
    for (const Term& t : row) node_rows_[t.col].push_back({r, t.coef});
    rows_.push_back(std::move(row));
    paths_.push_back(path);
    seen_.insert(path);
    return true;
  }

  int rows() const { return static_cast<int>(rows_.size()); }
  int cols() const { return static_cast<int>(nodes_.size()); }
  const Row& row(int i) const { return rows_[i]; }
  const Row& node_rows(int c) const { return node_rows_[c]; }
  Index node(int c) const { return nodes_[c]; }
  const std::vector<Path>& paths() const { return paths_; }

  Eigen::VectorXd local_masses() const {
    Eigen::VectorXd m(cols());
    for (int c = 0; c < cols(); ++c) m[c] = g_.mass(nodes_[c]);
    return m;
  }

  double row_dot(int i, const Eigen::VectorXd& x) const {
    double s = 0.0;
    for (const Term& t : rows_[i]) s += t.coef * x[t.col];
    return s;
  }

  NodeField scatter(const Eigen::VectorXd& local) const {
    NodeField out = NodeField::Zero(g_.size());
    for (int c = 0; c < cols(); ++c) out[nodes_[c]] = local[c];
    return out;
  }

 private:
  const SpaceGraph& g_;
  const std::vector<char>& support_;
  std::vector<int> local_;
  std::vector<Index> nodes_;
  std::vector<Row> rows_;
  std::vector<Row> node_rows_;  // transposed: col = row index
  std::vector<Path> paths_;
  std::set<Path> seen_;
};

// Lower bound certified by a nonnegative measure on family paths.
double weights_lower_bound(const SpaceGraph& g, const std::vector<Path>& paths, const std::vector<double>& w,
                           double p, const std::vector<char>& support) {
  NodeField usage = NodeField::Zero(g.size());
  double total = 0.0;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    if (!(w[k] > 0.0)) continue;
    total += w[k];
    for (const auto& [v, c] : path_coefficients(g, paths[k]))
      if (support[v]) usage[v] += w[k] * c;
  }
  if (total <= 0.0) return 0.0;
  if (p == 1.0) {
    double worst = 0.0;
    for (Index v = 0; v < g.size(); ++v) worst = std::max(worst, usage[v] / g.mass(v));
    return worst > 0.0 ? total / worst : kInf;
  }
  const double q = p / (p - 1.0);
  double energy = 0.0;
  for (Index v = 0; v < g.size(); ++v)
    if (usage[v] > 0.0) energy += std::pow(g.mass(v), 1.0 - q) * std::pow(usage[v], q);
  return energy > 0.0 ? std::pow(total, p) * std::pow(energy, 1.0 - p) : kInf;
}

// Condenser modulus through potentials: the E-F rho-distance is >= 1 iff
// some phi with phi = 0 on E, phi >= 1 on F satisfies
// phi_v - phi_u <= len (rho_u + rho_v) / 2 along every arc u -> v with
// u outside F and v outside E. The resulting convex program with sparse
// linear inequalities is solved by a primal-dual interior point method
// (Mehrotra predictor-corrector, feasible start).
struct PotentialSolution {
  bool applicable = false;
  bool converged = false;
  NodeField rho;
  std::vector<Path> paths;
  std::vector<double> weights;
  int iterations = 0;
  double residual = 0.0;
  std::string note;
};

PotentialSolution solve_potential(const SpaceGraph& g, const Condenser& cond, double p,
                                  const std::vector<char>& support, const ModulusOptions& opts) {
  PotentialSolution out;
  const Index n = g.size();
  std::vector<char> in_E(static_cast<std::size_t>(n), 0), in_F(static_cast<std::size_t>(n), 0);
  for (Index v : cond.E) in_E[v] = 1;
  for (Index v : cond.F) in_F[v] = 1;

  // geometric reach from E with F as stop nodes, charging supported ends only
  const EdgeCost weight = [&support](Index u, Index v, double len) {
    return 0.5 * len * ((support[u] ? 1.0 : 0.0) + (support[v] ? 1.0 : 0.0));
  };
  const ShortestPathTree reach = shortest_paths(g, cond.E, weight, kInf, &in_F);

  struct Arc {
    Index u, v;
    double len;
  };
  std::vector<Arc> arcs;
  double wmin = kInf;
  for (Index u = 0; u < n; ++u) {
    if (in_F[u] || !std::isfinite(reach.dist[u])) continue;
    for (const auto& nb : g.neighbors(u)) {
      if (in_E[nb.node]) continue;
      const double w = weight(u, nb.node, nb.length);
      if (w <= 0.0) return out;  // zero-cost arc: no strictly feasible start
      wmin = std::min(wmin, w);
      arcs.push_back({u, nb.node, nb.length});
    }
  }
  double D = kInf;
  for (Index f : cond.F) D = std::min(D, reach.dist[f]);
  if (!(D > 0.0) || !std::isfinite(D)) return out;
  out.applicable = true;

  // variables: rho on supported reachable nodes, phi on reachable nodes outside E
  std::vector<int> rv(static_cast<std::size_t>(n), -1), pv(static_cast<std::size_t>(n), -1);
  int N = 0;
  for (Index v = 0; v < n; ++v)
    if (support[v] && std::isfinite(reach.dist[v])) rv[v] = N++;
  const int n_rho = N;
  for (Index v = 0; v < n; ++v)
    if (!in_E[v] && std::isfinite(reach.dist[v])) pv[v] = N++;

  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> hvec;
  int row = 0;
  for (Index v = 0; v < n; ++v)
    if (rv[v] >= 0) {
      trip.emplace_back(row++, rv[v], -1.0);
      hvec.push_back(0.0);
    }
  for (Index v = 0; v < n; ++v)
    if (pv[v] >= 0) {
      trip.emplace_back(row++, pv[v], -1.0);
      hvec.push_back(in_F[v] ? -1.0 : 0.0);
    }
  const int first_arc = row;
  for (const Arc& a : arcs) {
    trip.emplace_back(row, pv[a.v], 1.0);
    if (pv[a.u] >= 0) trip.emplace_back(row, pv[a.u], -1.0);
    if (rv[a.u] >= 0) trip.emplace_back(row, rv[a.u], -0.5 * a.len);
    if (rv[a.v] >= 0) trip.emplace_back(row, rv[a.v], -0.5 * a.len);
    hvec.push_back(0.0);
    ++row;
  }
  const int m = row;
  Eigen::SparseMatrix<double> G(m, N);
  G.setFromTriplets(trip.begin(), trip.end());
  ipm::Problem prob;
  prob.G = std::move(G);
  prob.h = Eigen::Map<const Eigen::VectorXd>(hvec.data(), m);
  prob.p = p;
  prob.mu.resize(n_rho);
  for (Index v = 0; v < n; ++v)
    if (rv[v] >= 0) prob.mu[rv[v]] = g.mass(v);

  // strictly feasible start: rho = 3/D, phi = 2 d/D + eps with d the reach distance
  Eigen::VectorXd x0(N);
  const double kappa = 3.0 / D;
  const double eps = 0.5 * wmin / D;
  for (Index v = 0; v < n; ++v) {
    if (rv[v] >= 0) x0[rv[v]] = kappa;
    if (pv[v] >= 0) x0[pv[v]] = 2.0 * reach.dist[v] / D + eps;
  }
  ipm::Options io;
  io.max_iterations = opts.max_interior_iterations;
  io.tolerance = opts.kkt_tol;
  const ipm::Solution sol = ipm::solve(prob, std::move(x0), io);
  out.converged = sol.converged;
  out.iterations = sol.iterations;
  out.residual = sol.residual;
  out.note = sol.note;
  const Eigen::VectorXd& x = sol.x;
  const Eigen::VectorXd& z = sol.z;

  out.rho = NodeField::Zero(n);
  for (Index v = 0; v < n; ++v)
    if (rv[v] >= 0) out.rho[v] = std::max(x[rv[v]], 0.0);

  // arc multipliers form an E-F flow; peel it into weighted paths
  std::vector<double> flow(arcs.size());
  double zmax = 0.0;
  for (std::size_t k = 0; k < arcs.size(); ++k) zmax = std::max(zmax, z[first_arc + static_cast<int>(k)]);
  std::vector<std::vector<int>> incoming(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    flow[k] = z[first_arc + static_cast<int>(k)];
    if (flow[k] > 1e-12 * zmax) incoming[arcs[k].v].push_back(static_cast<int>(k));
    else flow[k] = 0.0;
  }
  const double tiny = 1e-12 * zmax;
  std::vector<char> on_path(static_cast<std::size_t>(n), 0);
  for (Index f : cond.F) {
    for (int guard = 0; guard < 100000; ++guard) {
      if (out.paths.size() >= kMaxDecomposition) break;
      Path rev{f};
      std::vector<int> used;
      Index v = f;
      bool ok = true;
      on_path[f] = 1;
      while (!in_E[v]) {
        int best = -1;
        for (int k : incoming[v])
          if (flow[k] > tiny && !on_path[arcs[k].u] && (best < 0 || flow[k] > flow[best])) best = k;
        if (best < 0) {
          ok = false;
          break;
        }
        used.push_back(best);
        v = arcs[best].u;
        rev.push_back(v);
        on_path[v] = 1;
      }
      for (Index u : rev) on_path[u] = 0;
      if (used.empty()) break;
      if (!ok) {
        // dead end: discard the stranded arc and retry from f
        flow[used.back()] = 0.0;
        continue;
      }
      double b = kInf;
      for (int k : used) b = std::min(b, flow[k]);
      for (int k : used) flow[k] -= b;
      std::reverse(rev.begin(), rev.end());
      out.paths.push_back(std::move(rev));
      out.weights.push_back(b);
    }
  }
  return out;
}


// returns (violated paths, global minimum rho-length)
using Oracle = std::function<std::vector<Path>(const NodeField& rho, double& min_length)>;

ModulusResult infinite_result(const SpaceGraph& g, const std::string& note) {
  ModulusResult res;
  res.status = ModulusResult::Status::Infinite;
  res.value = kInf;
  res.lower_bound = kInf;
  res.upper_bound = kInf;
  res.density = NodeField::Zero(g.size());
  res.note = note;
  return res;
}

std::vector<char> support_mask(const SpaceGraph& g, const ModulusOptions& opts) {
  if (opts.support.empty()) return std::vector<char>(static_cast<std::size_t>(g.size()), 1);
  if (static_cast<Index>(opts.support.size()) != g.size()) {
    throw Error(ErrorKind::InvalidInput, "support mask size does not match the graph");
  }
  return opts.support;
}

// Active-set subproblem min sum mu rho^p s.t. A rho >= 1, rho >= 0 by the
// interior point core; the path multipliers are the dual weights.
struct Subproblem {
  Eigen::VectorXd rho;
  Eigen::VectorXd weights;
  double residual = 0.0;
  bool converged = false;
  std::string note;
};

Subproblem solve_active(const ActiveSet& set, double p, const ModulusOptions& opts) {
  const int rows = set.rows();
  const int cols = set.cols();
  std::vector<Eigen::Triplet<double>> trip;
  double min_sum = kInf;
  for (int c = 0; c < cols; ++c) trip.emplace_back(c, c, -1.0);
  for (int i = 0; i < rows; ++i) {
    double sum = 0.0;
    for (const Term& t : set.row(i)) {
      trip.emplace_back(cols + i, t.col, -t.coef);
      sum += t.coef;
    }
    min_sum = std::min(min_sum, sum);
  }
  ipm::Problem prob;
  prob.G.resize(cols + rows, cols);
  prob.G.setFromTriplets(trip.begin(), trip.end());
  prob.h = Eigen::VectorXd::Zero(cols + rows);
  prob.h.tail(rows).setConstant(-1.0);
  prob.mu = set.local_masses();
  prob.p = p;
  ipm::Options io;
  io.max_iterations = opts.max_interior_iterations;
  io.tolerance = opts.kkt_tol;
  const ipm::Solution sol = ipm::solve(prob, Eigen::VectorXd::Constant(cols, 2.0 / min_sum), io);
  Subproblem out;
  out.rho = sol.x.cwiseMax(0.0);
  out.weights = sol.z.tail(rows);
  out.residual = sol.residual;
  out.converged = sol.converged;
  out.note = sol.note;
  return out;
}

ModulusResult solve(const SpaceGraph& g, double p, const ModulusOptions& opts, const Oracle& oracle) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidInput, "p must be a finite real >= 1");
  const std::vector<char> support = support_mask(g, opts);
  ActiveSet set(g, support);

  // uniform start; only the relative values matter for the first path search
  const double scale = std::max(2.0 * g.max_radius(), 1e-12);
  NodeField rho = NodeField::Zero(g.size());
  for (Index v = 0; v < g.size(); ++v)
    if (support[v]) rho[v] = 1e-6 / scale;

  ModulusResult res;
  Eigen::VectorXd weights;
  double L = 0.0;
  bool converged = false;
  for (int round = 0;; ++round) {
    std::vector<Path> fresh = oracle(rho, L);
    if (round > 0 && L >= 1.0 - opts.admissibility_tol) {
      converged = true;
      break;
    }
    std::size_t added = 0;
    for (const Path& path : fresh) {
      if (set.contains(path)) continue;
      if (!set.add(path)) return infinite_result(g, "path " + describe(path) + " carries no chargeable node");
      ++added;
    }
    if (added == 0) {
      res.note = "no new violated path; subproblem tolerance limits progress";
      break;
    }
    if (static_cast<std::size_t>(set.rows()) > opts.max_constraints) {
      res.note = "constraint cap reached";
      break;
    }
    ++res.iterations;

    if (p > 1.0) {
      Subproblem sub = solve_active(set, p, opts);
      res.kkt_residual = sub.residual;
      if (!sub.converged) res.note = sub.note;
      rho = set.scatter(sub.rho);
      weights = std::move(sub.weights);
    } else {
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(set.rows(), set.cols());
      for (int i = 0; i < set.rows(); ++i)
        for (const Term& t : set.row(i)) A(i, t.col) = t.coef;
      const lp::CoveringSolution lp_sol = lp::solve_covering(A, set.local_masses());
      res.lp_optimal = lp_sol.optimal;
      if (!lp_sol.optimal) {
        res.note = "linear program did not reach optimality";
        break;
      }
      rho = set.scatter(lp_sol.x);
      weights = lp_sol.dual;
    }
  }

  res.active_paths = set.paths();
  res.density = rho;
  res.min_length = L;
  res.value = (g.masses().array() * rho.array().pow(p)).sum();
  res.min_active_length = kInf;
  for (int i = 0; i < set.rows(); ++i) {
    double len = 0.0;
    for (const Term& t : set.row(i)) len += t.coef * rho[set.node(t.col)];
    res.min_active_length = std::min(res.min_active_length, len);
  }
  res.path_weights.assign(weights.data(), weights.data() + weights.size());
  res.path_weights.resize(res.active_paths.size(), 0.0);
  res.lower_bound = weights_lower_bound(g, res.active_paths, res.path_weights, p, support);
  res.upper_bound = L > 0.0 ? res.value / std::pow(L, p) : kInf;
  res.status = converged ? ModulusResult::Status::Converged : ModulusResult::Status::NonConverged;
  return res;
}

double condenser_distance(const SpaceGraph& g, const Condenser& cond, const NodeField& rho) {
  std::vector<char> in_F(static_cast<std::size_t>(g.size()), 0);
  for (Index v : cond.F) in_F[v] = 1;
  const EdgeCost cost = [&rho](Index u, Index v, double len) { return 0.5 * len * (rho[u] + rho[v]); };
  const ShortestPathTree tree = shortest_paths(g, cond.E, cost, kInf, &in_F);
  double L = kInf;
  for (Index f : cond.F) L = std::min(L, tree.dist[f]);
  return L;
}

ModulusResult finish_potential(const SpaceGraph& g, const Condenser& cond, double p, const std::vector<char>& support,
                               PotentialSolution sol, const ModulusOptions& opts) {
  ModulusResult res;
  res.iterations = sol.iterations;
  res.kkt_residual = sol.residual;
  res.density = std::move(sol.rho);
  double L = condenser_distance(g, cond, res.density);
  if (L > 1.0 && std::isfinite(L)) {
    res.density /= L;
    L = condenser_distance(g, cond, res.density);
  }
  res.min_length = L;
  res.value = (g.masses().array() * res.density.array().pow(p)).sum();
  res.upper_bound = L > 0.0 ? res.value / std::pow(L, p) : kInf;
  res.active_paths = std::move(sol.paths);
  res.path_weights = std::move(sol.weights);
  res.lower_bound = weights_lower_bound(g, res.active_paths, res.path_weights, p, support);
  res.min_active_length = kInf;
  for (const Path& path : res.active_paths)
    res.min_active_length = std::min(res.min_active_length, line_integral(g, path, res.density));
  // the path weights certify optimality even when the interior point merit stalls
  const bool tight = res.upper_bound - res.lower_bound <= 1e-7 * res.upper_bound;
  const bool certified = L >= 1.0 - opts.admissibility_tol;
  const bool done = certified && (sol.converged || tight);
  res.lp_optimal = p == 1.0 && done;
  res.status = done ? ModulusResult::Status::Converged : ModulusResult::Status::NonConverged;
  if (!done) res.note = sol.note;
  return res;
}

}  // namespace

const char* to_string(ModulusResult::Status s) {
  switch (s) {
    case ModulusResult::Status::Converged: return "converged";
    case ModulusResult::Status::Infinite: return "infinite";
    case ModulusResult::Status::NonConverged: return "non-converged";
  }
  return "?";
}

Condenser truncated_condenser(const SpaceGraph& g, double R, double inner) {
  if (!(R > inner)) throw Error(ErrorKind::InvalidInput, "outer radius must exceed the inner radius");
  Condenser c;
  for (Index v = 0; v < g.size(); ++v) {
    const double d = g.radius(v);
    if (d <= inner) c.E.push_back(v);
    else if (d >= R) c.F.push_back(v);
  }
  return c;
}

ModulusResult modulus(const SpaceGraph& g, const ExplicitPaths& family, double p, const ModulusOptions& opts) {
  std::vector<std::map<Index, double>> coefs;
  coefs.reserve(family.paths.size());
  for (const Path& path : family.paths) coefs.push_back(path_coefficients(g, path));
  if (family.paths.empty()) return infinite_result(g, "empty family");

  Oracle oracle = [&](const NodeField& rho, double& min_length) {
    std::vector<std::pair<double, std::size_t>> lens;
    min_length = kInf;
    for (std::size_t i = 0; i < coefs.size(); ++i) {
      double len = 0.0;
      for (const auto& [v, c] : coefs[i]) len += c * rho[v];
      min_length = std::min(min_length, len);
      if (len < 1.0 - opts.admissibility_tol) lens.emplace_back(len, i);
    }
    std::sort(lens.begin(), lens.end());
    std::vector<Path> out;
    for (const auto& [len, i] : lens) {
      if (out.size() >= opts.paths_per_round) break;
      out.push_back(family.paths[i]);
    }
    return out;
  };
  return solve(g, p, opts, oracle);
}

ModulusResult modulus(const SpaceGraph& g, const Condenser& family, double p, const ModulusOptions& opts) {
  if (family.E.empty() || family.F.empty()) return infinite_result(g, "empty family");
  std::vector<char> in_F(static_cast<std::size_t>(g.size()), 0);
  for (Index v : family.F) {
    if (v < 0 || v >= g.size()) throw Error(ErrorKind::InvalidInput, "condenser node out of range");
    in_F[v] = 1;
  }
  for (Index v : family.E) {
    if (v < 0 || v >= g.size()) throw Error(ErrorKind::InvalidInput, "condenser node out of range");
    if (in_F[v]) throw Error(ErrorKind::Precondition, "condenser sets E and F intersect at node " + std::to_string(v));
  }

  const std::vector<char> support = support_mask(g, opts);
  std::string fallback;
  if (opts.method != ModulusOptions::Method::ConstraintGeneration) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidInput, "p must be a finite real >= 1");
    PotentialSolution sol = solve_potential(g, family, p, support, opts);
    if (sol.applicable) return finish_potential(g, family, p, support, std::move(sol), opts);
    fallback = "potential formulation has zero-cost arcs; constraint generation used";
  }

  Oracle oracle = [&](const NodeField& rho, double& min_length) {
    const EdgeCost cost = [&rho](Index u, Index v, double len) { return 0.5 * len * (rho[u] + rho[v]); };
    const ShortestPathTree tree = shortest_paths(g, family.E, cost, kInf, &in_F);
    std::vector<std::pair<double, Index>> hits;
    min_length = kInf;
    for (Index f : family.F) {
      min_length = std::min(min_length, tree.dist[f]);
      if (tree.dist[f] < 1.0 - opts.admissibility_tol) hits.emplace_back(tree.dist[f], f);
    }
    std::sort(hits.begin(), hits.end());
    std::vector<Path> out;
    std::set<Index> penultimate;
    for (const auto& [d, f] : hits) {
      if (out.size() >= opts.paths_per_round) break;
      const Index prev = tree.parent[f];
      if (!penultimate.insert(prev).second) continue;
      out.push_back(tree.path_to(f));
    }
    return out;
  };
  ModulusResult res = solve(g, p, opts, oracle);
  if (res.status == ModulusResult::Status::Infinite && res.note == "empty family") res.note = "no E-F path";
  if (!fallback.empty() && res.note.empty()) res.note = fallback;
  return res;
}

std::vector<CondenserStep> condenser_sequence(const SpaceGraph& g, double p, std::span<const double> radii,
                                              const ModulusOptions& opts) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 1.0)) throw Error(ErrorKind::InvalidInput, "condenser radii must exceed 1");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw Error(ErrorKind::InvalidInput, "condenser radii must increase");
    if (radii[i] > g.max_radius()) throw Error(ErrorKind::InvalidInput, "condenser radius beyond the graph");
  }
  std::vector<CondenserStep> steps;
  for (double R : radii) {
    CondenserStep step;
    step.radius = R;
    step.result = modulus(g, truncated_condenser(g, R), p, opts);
    // annuli j with 2^{j+1} <= R
    const int J = static_cast<int>(std::floor(std::log2(R) + 1e-12)) - 1;
    double growth = NAN;
    if (J >= 0) {
      RadialProfile profile = graph_profile(g, 0, J);
      profile.asymptotic = AsymptoticClass::unknown();
      if (!profile.empty()) growth = script_R(profile, p).last_partial();
    }
    step.truncated_growth = growth;
    step.product = p > 1.0 ? step.result.value * std::pow(growth, p - 1.0) : step.result.value * growth;
    steps.push_back(std::move(step));
  }
  return steps;
}

double length_inside(const SpaceGraph& g, std::span<const Index> path, const std::vector<char>& inside) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto len = g.edge_length(path[i - 1], path[i]);
    if (!len) throw Error(ErrorKind::MalformedPath, "non-adjacent consecutive nodes in path " + describe(path));
    total += 0.5 * *len * ((inside[path[i - 1]] ? 1.0 : 0.0) + (inside[path[i]] ? 1.0 : 0.0));
  }
  return total;
}

namespace {

std::vector<char> region_mask(const SpaceGraph& g, std::span<const Index> region, const ModulusOptions& opts,
                              double L, double p) {
  if (!(L > 0.0)) throw Error(ErrorKind::InvalidInput, "overflow width must be positive");
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidInput, "p must be >= 1");
  std::vector<char> inside(static_cast<std::size_t>(g.size()), 0);
  for (Index v : region) {
    if (v < 0 || v >= g.size()) throw Error(ErrorKind::InvalidInput, "region node out of range");
    if (!opts.support.empty() && !opts.support[v]) {
      throw Error(ErrorKind::Precondition, "region node " + std::to_string(v) + " lies outside the density support");
    }
    inside[v] = 1;
  }
  return inside;
}

double region_measure(const SpaceGraph& g, const std::vector<char>& inside) {
  double m = 0.0;
  for (Index v = 0; v < g.size(); ++v)
    if (inside[v]) m += g.mass(v);
  return m;
}

}  // namespace

OverflowBound overflow_bound(const SpaceGraph& g, const ExplicitPaths& family, std::span<const Index> E,
                             double L, double p, const ModulusOptions& opts) {
  const std::vector<char> inside = region_mask(g, E, opts, L, p);
  for (const Path& path : family.paths) {
    const double len = length_inside(g, path, inside);
    if (len < L * (1.0 - 1e-12)) {
      throw Error(ErrorKind::Precondition, "witness path " + describe(path) + " spends only " +
                                               std::to_string(len) + " inside the region");
    }
  }
  OverflowBound out;
  out.bound = region_measure(g, inside) / std::pow(L, p);
  out.modulus = modulus(g, family, p, opts).value;
  out.holds = out.modulus <= out.bound * (1.0 + 1e-9) + 1e-12;
  return out;
}

OverflowBound overflow_bound(const SpaceGraph& g, const Condenser& family, std::span<const Index> region,
                             double L, double p, const ModulusOptions& opts) {
  const std::vector<char> inside = region_mask(g, region, opts, L, p);
  std::vector<char> in_F(static_cast<std::size_t>(g.size()), 0);
  for (Index v : family.F) in_F[v] = 1;
  const EdgeCost cost = [&inside](Index u, Index v, double len) {
    return 0.5 * len * ((inside[u] ? 1.0 : 0.0) + (inside[v] ? 1.0 : 0.0));
  };
  const ShortestPathTree tree = shortest_paths(g, family.E, cost, kInf, &in_F);
  for (Index f : family.F) {
    if (tree.dist[f] < L * (1.0 - 1e-12)) {
      throw Error(ErrorKind::Precondition, "witness path " + describe(tree.path_to(f)) + " spends only " +
                                               std::to_string(tree.dist[f]) + " inside the region");
    }
  }
  OverflowBound out;
  out.bound = region_measure(g, inside) / std::pow(L, p);
  out.modulus = modulus(g, family, p, opts).value;
  out.holds = out.modulus <= out.bound * (1.0 + 1e-9) + 1e-12;
  return out;
}

}  // namespace mms

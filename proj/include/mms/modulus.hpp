#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mms/graph.hpp"

namespace mms {

struct ExplicitPaths {
  std::vector<Path> paths;
};

/// All paths joining the node sets E and F.
struct Condenser {
  NodeSet E;
  NodeSet F;
};

/// For each radius R_i the condenser from the closed unit ball
/// {d(O, .) <= 1} to the complement {d(O, .) >= R_i} of the open ball.
struct TruncatedRays {
  std::vector<double> radii;
};

using CurveFamily = std::variant<ExplicitPaths, Condenser, TruncatedRays>;

/// Condenser (closed unit ball, complement of B(O, R)).
Condenser truncated_condenser(const SpaceGraph& g, double R, double inner = 1.0);

/// Nonnegative node function rho.
using Density = NodeField;

struct ModulusOptions {
  enum class Method {
    Auto,                  // potentials for condensers, constraint generation otherwise
    ConstraintGeneration,  // shortest-path constraint generation
    Potential,             // condensers only: interior point on the potential formulation
  };
  Method method = Method::Auto;
  /// Nodes allowed to carry density; all nodes when empty.
  std::vector<char> support;
  double admissibility_tol = 1e-6;
  double kkt_tol = 1e-9;
  std::size_t max_constraints = 10'000;
  std::size_t paths_per_round = 64;
  int max_newton = 400;
  int max_interior_iterations = 300;
};

struct ModulusResult {
  enum class Status { Converged, Infinite, NonConverged };
  Status status = Status::Converged;
  /// sum_v rho(v)^p mu(v) for the returned density; +inf for an empty
  /// family or a family containing a path that no admissible density can
  /// charge.
  double value = 0.0;
  Density density;
  std::vector<Path> active_paths;
  /// Dual weight of each active path (a nonnegative measure on the family).
  std::vector<double> path_weights;
  /// Lower bound certified by the path weights: T^p E_q^{1-p} for p > 1
  /// (T total weight, E_q the conjugate usage energy), T / max usage/mass
  /// for p = 1.
  double lower_bound = 0.0;
  /// Upper bound from the rescaled globally admissible density.
  double upper_bound = 0.0;
  double gap() const { return upper_bound - lower_bound; }
  /// Minimum rho-length over the whole family at termination.
  double min_length = 0.0;
  /// Minimum rho-length over the active paths.
  double min_active_length = 0.0;
  double kkt_residual = 0.0;
  bool lp_optimal = false;
  int iterations = 0;
  std::string note;
};

const char* to_string(ModulusResult::Status s);

/// Discrete p-modulus of a path family on a graph. Explicit families use
/// constraint generation: the minimum rho-length path is added while it is
/// shorter than 1 - admissibility_tol and the subproblem on the active
/// paths is re-solved (interior point for p > 1, exact LP for p = 1).
/// Condensers default to an interior point on the potential formulation.
ModulusResult modulus(const SpaceGraph& g, const ExplicitPaths& family, double p,
                      const ModulusOptions& opts = {});
ModulusResult modulus(const SpaceGraph& g, const Condenser& family, double p,
                      const ModulusOptions& opts = {});

struct CondenserStep {
  double radius = 0.0;
  ModulusResult result;
  /// value * (truncated R_p)^{p-1} for p > 1, value * truncated R_1 for p = 1.
  double product = 0.0;
  double truncated_growth = 0.0;
};

/// Moduli of the condensers (closed B(O,1), complement of B(O, R_i)) with
/// the growth-functional product check.
std::vector<CondenserStep> condenser_sequence(const SpaceGraph& g, double p, std::span<const double> radii,
                                              const ModulusOptions& opts = {});

struct OverflowBound {
  double bound = 0.0;  // mu(E) / L^p
  double modulus = 0.0;
  bool holds = false;
};

/// Admissibility bound mu(E) / L^p for a family whose every path spends
/// length >= L inside E: chi_E / L is admissible. The hypothesis is
/// verified path by path; a failing path is reported as a witness through
/// a Precondition error.
OverflowBound overflow_bound(const SpaceGraph& g, const ExplicitPaths& family, std::span<const Index> E,
                             double L, double p, const ModulusOptions& opts = {});

/// Condenser version: the hypothesis is that every E-F path spends length
/// >= L inside `region`, checked with one shortest-path computation.
OverflowBound overflow_bound(const SpaceGraph& g, const Condenser& family, std::span<const Index> region,
                             double L, double p, const ModulusOptions& opts = {});

/// Length of the part of a walk inside E (edges with both ends in E count
/// fully, edges with one end in E count half, matching the trapezoid rule).
double length_inside(const SpaceGraph& g, std::span<const Index> path, const std::vector<char>& inside);

}  // namespace mms

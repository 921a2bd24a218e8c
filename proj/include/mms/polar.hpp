#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mms/graph.hpp"
#include "mms/modulus.hpp"
#include "mms/radial_function.hpp"

namespace mms {

using PointRef = Eigen::Ref<const Eigen::VectorXd>;
using PointFunction = std::function<double(PointRef)>;
/// Integral of a nonnegative function against the ambient measure.
using VolumeIntegrator = std::function<double(const PointFunction&)>;

/// A sampled radial curve: points (one column each), cumulative arc length
/// s (s[0] = 0) and the coordinate weight h at every point.
struct PolarCurve {
  Eigen::MatrixXd points;
  std::vector<double> s;
  std::vector<double> h;
  std::size_t size() const { return s.size(); }
};

/// Finite discretisation of a weak polar coordinate system: directions with
/// probability weights, one truncated radial curve per direction, and the
/// system constant C.
struct PolarSystem {
  std::string name;
  std::vector<double> weights;
  std::vector<PolarCurve> curves;
  double C = 1.0;
  /// Points are coordinates in R^dim with the Euclidean metric, so the arc
  /// length increments must equal the point spacing. Tree systems store
  /// (vertex, depth) pairs instead.
  bool euclidean = true;
  /// The defining inequality holds with equality (spherical coordinates).
  bool identity = false;
  /// Common start of every curve; empty for families re-parameterised away
  /// from the coordinate point.
  Eigen::VectorXd origin;
  /// Nominal spacing of the samples along each curve.
  double step = 0.0;

  /// Throws InvalidInput when a structural invariant is violated.
  void validate() const;
};

/// sum_xi w_xi * trapezoid of f h along curve xi.
double polar_lhs(const PolarSystem& sys, const PointFunction& f);

/// Same rule on every other sample (twice the step), used as an error estimate.
double polar_lhs_coarse(const PolarSystem& sys, const PointFunction& f);

struct PolarTestFunction {
  std::string name;
  PointFunction f;
};

struct PolarRatio {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;  // integral of f against the measure (without C)
  double ratio = 0.0;  // lhs / (C rhs)
  /// |lhs - lhs on the doubled step| / (C rhs)
  double error_estimate = 0.0;
  bool skipped = false;  // lhs = rhs = 0
  bool violated = false;
};

struct PolarReport {
  std::vector<PolarRatio> rows;
  double max_ratio = 0.0;
  bool pass = false;
  std::string note;
};

struct PolarVerifyOptions {
  double tol = 1e-3;            // one-sided: ratio <= 1 + tol
  double identity_tol = 0.02;   // identity systems: |ratio - 1| <= identity_tol
};

PolarReport verify_polar(const PolarSystem& sys, const std::vector<PolarTestFunction>& tests,
                         const VolumeIntegrator& volume, const PolarVerifyOptions& opts = {});

/// Kernel inequality: sum_xi w_xi int f ds <= C int f d(x,O)/mu(B(O,d(x,O))) dmu.
/// The coordinate weight is not used.
PolarReport semmes_check(const PolarSystem& sys, const PointFunction& kernel, double C,
                         const std::vector<PolarTestFunction>& tests, const VolumeIntegrator& volume,
                         double tol = 1e-3);

struct HatFamily {
  PolarSystem system;                 // re-parameterised curves from their exit of B(O,1)
  std::vector<std::size_t> kept;      // original direction index of each curve
  /// Excluded directions with the index of the first sample back inside B(O,1).
  std::vector<std::pair<std::size_t, std::size_t>> reentries;
  std::vector<std::size_t> never_exit;  // curves that stay in B(O,1) within the stored range
};

/// Starts every selected curve at its exit from the open unit ball and drops
/// curves that return to it. The distance is Euclidean from the origin
/// unless `dist` is given. Weights of the kept curves are renormalised.
HatFamily hat_truncate(const PolarSystem& sys, const std::vector<std::size_t>& directions,
                       const PointFunction& dist = {});

/// Truncates every curve at the first sample with distance >= R.
PolarSystem truncate_at(const PolarSystem& sys, double R, const PointFunction& dist = {});

/// Snaps Euclidean curves to a lattice graph (integer node positions) and
/// joins consecutive snapped nodes by shortest paths.
ExplicitPaths graph_paths(const SpaceGraph& g, const PolarSystem& sys);

namespace polar {

struct Sampling {
  int directions = 256;
  double length = 6.0;  // truncation length of every curve
  double step = 0.01;
};

/// Rays O + r xi in R^n (n = 2: equally spaced angles; n = 3: spherical
/// Fibonacci points), h = |S^{n-1}| r^{n-1}, C = 1.
PolarSystem euclidean_spherical(int n, const Sampling& s);

/// Geodesic rays of the depth-limited K-regular tree, one per leaf with
/// weight K^{-depth}; metric ds = lambda(t) dt, measure mu(t) dt on every
/// edge, h = K^t mu(t) / lambda(t), C = 1. Points are (vertex, t) where
/// vertex is the breadth-first index of the far end of the current edge.
PolarSystem tree_polar(int K, int depth, const RadialFunction& mu, const RadialFunction& lambda,
                       double step);

/// Distance to the depth-limited Cantor set: positive only inside the
/// removed middle thirds of generations 1..depth in every unit interval.
double cantor_delta(double x, int depth);

/// Vertical curves gamma_y(x) = (x, delta(x) tan(pi y / 4)) over [0, length],
/// uniform y samples, h = pi delta / (4 cos^2(pi y / 4)), C = 2.
PolarSystem cantor_diamond(int depth, const Sampling& s);

/// The three systems on the strip |x2| <= 1 joined with the wedge
/// |x2| <= x1: variant 1 (left strip rays, h = 1 on x1 < -1, C = 1/2),
/// variant 2 (wedge rays, h = |x| on the upper half of the wedge, C = 2/pi),
/// variant 3 (union, h = h1 + h2, C = 1/(2 + pi/2)).
PolarSystem wedge_strip(int variant, const Sampling& s);

/// Midpoint rule on [-T, T]^n (n = 2 or 3) with `cells` cells per side.
double euclidean_volume(const PointFunction& f, int n, double T, int cells);
/// Midpoint rule over the strip-wedge region inside [-T, T]^2.
double wedge_volume(const PointFunction& f, double T, int cells);
/// Midpoint rule over the diamonds of the depth-limited region on [0, length].
double cantor_volume(const PointFunction& f, int depth, double length, int cells);
/// Midpoint rule on every edge of the depth-limited tree: sum_e int f mu dt.
double tree_volume(const PointFunction& f, int K, int depth, const RadialFunction& mu, int cells_per_edge);

}  // namespace polar

}  // namespace mms

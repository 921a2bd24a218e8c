#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mms/radial_function.hpp"

namespace mms {

/// Declared tail behaviour of an annulus-mass sequence. Tail behaviour is
/// never inferred from a finite prefix; it is part of the input.
struct AsymptoticClass {
  enum class Kind { Polynomial, Geometric, Exponential, Unknown };
  Kind kind = Kind::Unknown;
  /// Polynomial: exponent a with masses[j] ~ 2^{j a}. Geometric: ratio g
  /// with masses[j+1] / masses[j] -> g. Unused otherwise.
  double parameter = 0.0;

  static AsymptoticClass polynomial(double a) { return {Kind::Polynomial, a}; }
  static AsymptoticClass geometric(double g) { return {Kind::Geometric, g}; }
  static AsymptoticClass exponential() { return {Kind::Exponential, 0.0}; }
  static AsymptoticClass unknown() { return {Kind::Unknown, 0.0}; }
};

std::string to_string(const AsymptoticClass& c);

/// Masses of the dyadic annuli A_{2^j}(O) = B(O, 2^{j+1}) \ B(O, 2^j).
struct RadialProfile {
  int j_min = 0;
  std::vector<double> masses;  // masses[k] is the annulus with j = j_min + k
  AsymptoticClass asymptotic;

  int j_max() const { return j_min + static_cast<int>(masses.size()) - 1; }
  bool empty() const { return masses.empty(); }
  double mass(int j) const { return masses.at(static_cast<std::size_t>(j - j_min)); }
  /// Throws InvalidInput unless every mass is positive and finite.
  void validate() const;
};

/// mu(B(O, r)) = constant * r^Q.
struct AhlforsModel {
  double Q = 2.0;
  double constant = 1.0;
  /// Regularity constant C with r^Q / C <= mu(B(O,r)) <= C r^Q.
  double regularity_constant() const { return constant >= 1.0 ? constant : 1.0 / constant; }
};

/// [0, inf) with the Euclidean distance and measure weight(t) dt.
struct WeightedHalfLine {
  RadialFunction weight = RadialFunction::constant(1.0);
};

/// R^n with Lebesgue measure weighted by |x|^alpha.
struct PowerWeightedEuclidean {
  int n = 2;
  double alpha = 0.0;
};

/// Rooted tree in which every vertex has K children. Positions are the
/// combinatorial depth t; the metric is ds = edge_length(t) dt and the
/// measure on each edge is edge_measure(t) dt.
struct KRegularTree {
  int K = 2;
  RadialFunction edge_measure = RadialFunction::constant(1.0);
  RadialFunction edge_length = RadialFunction::constant(1.0);
};

using ModelVariant = std::variant<AhlforsModel, WeightedHalfLine, PowerWeightedEuclidean, KRegularTree>;

/// A rotationally symmetric model space.
struct ModelSpace {
  ModelVariant variant;
  /// Overrides the class derived from the variant parameters when set.
  std::optional<AsymptoticClass> declared_class;
  int j_min = 0;

  std::string name() const;
  /// mu(B(O, r)).
  double ball_measure(double r) const;
  /// d/dr mu(B(O, r)), the shell density used by radial integrals.
  double shell_density(double r) const;
  AsymptoticClass asymptotic_class() const;
};

/// surface area |S^{n-1}| of the unit sphere in R^n.
double sphere_area(int n);

/// masses[j] = mu(B(O, 2^{j+1})) - mu(B(O, 2^j)) for j in [j_min, j_max].
/// Throws NonMonotone for a decreasing ball measure and Overflow when a
/// mass is not representable.
RadialProfile annulus_masses(const ModelSpace& space, int j_max);

struct Ball {
  Eigen::VectorXd center;
  double radius = 1.0;
};

struct MuckenhouptEstimate {
  double value = 1.0;
  /// Maximum over a finite sample: always a lower bound for the A_p constant.
  bool lower_bound = true;
  std::size_t balls = 0;
  /// Index of the ball attaining the maximum.
  std::size_t argmax = 0;
};

/// Sampled Muckenhoupt A_p characteristic of w(x) = |x|^alpha, of the form
/// (avg w)^{1/p} (avg w^{1/(1-p)})^{(p-1)/p} for p > 1 and
/// (avg w) ||w^{-1}||_inf for p = 1. Returns +inf when the dual weight is
/// not integrable on a sampled ball; throws NonIntegrable when w itself
/// is not integrable on a sampled ball.
MuckenhouptEstimate muckenhoupt_constant(const PowerWeightedEuclidean& space, double p,
                                         std::span<const Ball> sample, int resolution = 256);

}  // namespace mms

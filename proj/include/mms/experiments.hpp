#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mms/graph.hpp"
#include "mms/growth.hpp"
#include "mms/model_spaces.hpp"
#include "mms/modulus.hpp"
#include "mms/polar.hpp"

namespace mms {

enum class Trend { Bounded, Decaying, Inconclusive };
const char* to_string(Trend t);

struct TrendFit {
  Trend trend = Trend::Inconclusive;
  double slope = 0.0;        // least-squares log-log slope over the last three radii
  double tail_spread = 0.0;  // max / min of the last three values
};

struct TrendRule {
  double bounded_spread = 1.2;  // last three values within 20%
  double floor = 1e-5;          // and above 10x the admissibility tolerance
  double decay_slope = -0.1;
};

/// Bounded when the last three values are within the spread and above the
/// floor while their slope is not decaying; Decaying when that slope is
/// below the threshold and the tail is not bounded; otherwise Inconclusive.
TrendFit classify_trend(std::span<const double> radii, std::span<const double> values, const TrendRule& rule = {});

struct Thm12Case {
  std::string name;
  const SpaceGraph* graph = nullptr;
  /// Profile with the declared tail class used for the series verdict and
  /// the block construction.
  RadialProfile profile;
  double p = 2.0;
  std::vector<double> radii;
};

struct Thm12Row {
  std::string name;
  double p = 2.0;
  GrowthReport series;
  std::vector<CondenserStep> condensers;
  TrendFit trend;
  bool blocks_constructible = false;
  std::string blocks_note;
  bool consistent = false;
  std::string note;
};

/// Series verdict, condenser trend and block constructibility for one case.
Thm12Row thm12_probe(const Thm12Case& c, const ModulusOptions& opts = {});

struct Thm13Case {
  std::string name;
  ModelSpace space;           // for both growth functionals
  RadialFunction h;           // coordinate weight
  int profile_levels = 320;   // four p=2 blocks on planar growth need ~290 annuli
  const SpaceGraph* graph = nullptr;  // lattice graph for the hat-family modulus
  const PolarSystem* system = nullptr;
  double p = 2.0;
  std::vector<double> radii;  // hat-family truncations
  double weight_radius = 1e6; // truncation of the weighted integral's prefix
  /// Hat-family moduli from an earlier row with the same system and radii;
  /// recomputed when empty.
  std::vector<double> hat_values;
};

struct Thm13Row {
  std::string name;
  double p = 2.0;
  GrowthReport weighted;      // R_p(h, O)
  std::vector<double> hat_values;
  TrendFit trend;
  GrowthReport series;        // dyadic series
  bool blocks_constructible = false;
  bool violation = false;
  std::string note;
};

/// Checks that a finite weighted integral comes with a bounded hat-family
/// modulus and that a bounded hat-family modulus comes with a finite series.
Thm13Row thm13_sandwich(const Thm13Case& c, const ModulusOptions& opts = {});

struct TwoEndsDemo {
  NodeField u;
  NodeField upper_gradient;
  double energy = 0.0;
  std::pair<double, double> tail_values{0.0, 0.0};
  bool upper_gradient_holds = false;  // checked edge by edge
  std::size_t ends = 0;
};

/// u = 0 beyond radius 1 on the first end, 1 beyond radius 1 on the second,
/// linear in d(O, .) through B(O, 1); the upper gradient is the largest
/// incident edge slope at every node.
TwoEndsDemo two_ends_demo(const SpaceGraph& g, double p);

struct Example43Row {
  double alpha = 0.0;
  double p = 1.0;
  bool skipped = false;
  std::string reason;
  std::optional<double> muckenhoupt;  // sampled characteristic
  RatioBand band;
  bool stable = false;
};

/// compare_R bands for |x|^alpha in R^n with h = r^{n-1+alpha}.
std::vector<Example43Row> example43_sweep(int n, std::span<const double> alphas, std::span<const double> ps,
                                          std::span<const int> levels, double band_limit = 4.0);

}  // namespace mms

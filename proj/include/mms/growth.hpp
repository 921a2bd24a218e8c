#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mms/model_spaces.hpp"

namespace mms {

struct GrowthReport {
  enum class Kind { Finite, Divergent, Undecided };
  enum class Basis { ClosedFormTail, DeclaredClass, PrefixOnly };

  double p = 2.0;
  Kind kind = Kind::Undecided;
  Basis basis = Basis::PrefixOnly;
  /// Set for Kind::Finite: prefix plus closed-form (or declared) tail.
  std::optional<double> value;
  /// Index attached to terms[0]: annulus j for the series, dyadic radius
  /// exponent k (shell [2^{k-1}, 2^k] intersected with [1, R]) for the
  /// weighted integral.
  int first_index = 0;
  std::vector<double> terms;
  /// Partial sums (p > 1) or running sup (p = 1).
  std::vector<double> partial;
  /// p = 1 weighted version: points per dyadic shell of the sup grid.
  int grid_resolution = 0;

  bool finite() const { return kind == Kind::Finite; }
  bool divergent() const { return kind == Kind::Divergent; }
  double last_partial() const { return partial.empty() ? 0.0 : partial.back(); }
};

const char* to_string(GrowthReport::Kind k);
const char* to_string(GrowthReport::Basis b);

/// The dyadic-annulus series: sum_j (2^j)^{p/(p-1)} mu(A_j)^{1/(1-p)} for
/// p > 1 and sup_j 2^j / mu(A_j) for p = 1. Finiteness is decided from the
/// declared asymptotic class only.
GrowthReport script_R(const RadialProfile& profile, double p);

/// Integral of h^{p/(1-p)} over B(O,R) \ B(O,1) for p > 1, or the grid ess
/// sup of 1/h on the same shell for p = 1, for a radial coordinate weight.
GrowthReport R_weight(const ModelSpace& space, const RadialFunction& h, double p, double R);

struct RatioBand {
  std::vector<int> levels;     // truncation level J: annuli j <= J, radius 2^{J+1}
  std::vector<double> ratios;  // truncated R_p(h) / truncated script R_p
  double min = 0.0;
  double max = 0.0;
  bool defined = false;
  /// true when the space and weight are a Muckenhoupt configuration for
  /// which the two functionals are comparable (band asserted).
  bool asserted = false;
  std::string note;
  double spread() const { return min > 0.0 ? max / min : INFINITY; }
};

/// Ratio of the truncated weighted integral to the truncated series over
/// the given truncation levels.
RatioBand compare_R(const ModelSpace& space, const RadialFunction& h, double p, std::span<const int> levels);

/// Muckenhoupt range test for |x|^alpha in R^n: -n < alpha < n(p-1) for
/// p > 1, -n < alpha <= 0 for p = 1.
bool in_muckenhoupt_range(int n, double alpha, double p);

}  // namespace mms

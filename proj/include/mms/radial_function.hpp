#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace mms {

/// Parametric radial function f(t) = coeff * t^exponent * exp(rate * t),
/// optionally zeroed for t < cutoff. Covers the constant, power and
/// exponential profiles used by the model spaces and coordinate weights.
struct RadialFunction {
  double coeff = 1.0;
  double exponent = 0.0;
  double rate = 0.0;
  double cutoff = 0.0;

  static RadialFunction constant(double c) { return {c, 0.0, 0.0, 0.0}; }
  static RadialFunction power(double c, double e) { return {c, e, 0.0, 0.0}; }
  static RadialFunction exponential(double c, double b) { return {c, 0.0, b, 0.0}; }

  RadialFunction with_cutoff(double t0) const {
    RadialFunction f = *this;
    f.cutoff = t0;
    return f;
  }

  RadialFunction scaled(double c) const {
    RadialFunction f = *this;
    f.coeff *= c;
    return f;
  }

  double operator()(double t) const {
    if (t < cutoff) return 0.0;
    double v = coeff;
    if (exponent != 0.0) v *= std::pow(t, exponent);
    if (rate != 0.0) v *= std::exp(rate * t);
    return v;
  }

  /// The shape t^exponent * exp(rate t) without the coefficient.
  double shape(double t) const {
    if (t < cutoff) return 0.0;
    double v = 1.0;
    if (exponent != 0.0) v *= std::pow(t, exponent);
    if (rate != 0.0) v *= std::exp(rate * t);
    return v;
  }

  bool is_power_law() const { return rate == 0.0; }
};

}  // namespace mms

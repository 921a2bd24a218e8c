#pragma once

#include <span>

#include "mms/graph.hpp"

namespace mms {

struct BallSample {
  Index center = 0;
  double radius = 1.0;
};

struct PoincareProbe {
  /// max over evaluated balls of avg_B |u - u_B| / (r (avg_{lambda B} rho^p)^{1/p})
  double value = 0.0;
  std::size_t argmax = 0;     // index into the sample
  std::size_t evaluated = 0;
  std::size_t skipped = 0;    // empty ball or vanishing denominator
};

/// Empirical Poincare constant of the pair (u, rho) over sampled balls.
/// Throws AllSkipped when no sampled ball has a positive denominator.
PoincareProbe poincare_probe(const SpaceGraph& g, const NodeField& u, const NodeField& rho, double p,
                             double lambda, std::span<const BallSample> sample);

}  // namespace mms

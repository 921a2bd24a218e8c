#include "mms/poincare.hpp"

#include <cmath>

#include "mms/error.hpp"

namespace mms {

PoincareProbe poincare_probe(const SpaceGraph& g, const NodeField& u, const NodeField& rho, double p,
                             double lambda, std::span<const BallSample> sample) {
  if (u.size() != g.size() || rho.size() != g.size()) {
    throw Error(ErrorKind::InvalidInput, "u and rho must have one value per node");
  }
  if (!(p >= 1.0) || !(lambda >= 1.0)) throw Error(ErrorKind::InvalidInput, "need p >= 1 and lambda >= 1");
  if (sample.empty()) throw Error(ErrorKind::InvalidInput, "empty ball sample");
  if ((rho.array() < 0.0).any()) throw Error(ErrorKind::InvalidInput, "rho must be nonnegative");

  PoincareProbe out;
  bool any = false;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& b = sample[i];
    const NodeSet inner = ball(g, b.center, b.radius);
    const NodeSet outer = ball(g, b.center, lambda * b.radius);
    const double m = measure(g, inner);
    const double M = measure(g, outer);
    if (inner.empty() || !(m > 0.0) || !(M > 0.0)) {
      ++out.skipped;
      continue;
    }
    double mean = 0.0;
    for (Index v : inner) mean += u[v] * g.mass(v);
    mean /= m;
    double osc = 0.0;
    for (Index v : inner) osc += std::abs(u[v] - mean) * g.mass(v);
    osc /= m;
    double energy = 0.0;
    for (Index v : outer) energy += std::pow(rho[v], p) * g.mass(v);
    energy /= M;
    const double denom = b.radius * std::pow(energy, 1.0 / p);
    if (!(denom > 0.0)) {
      ++out.skipped;
      continue;
    }
    ++out.evaluated;
    const double ratio = osc / denom;
    if (!any || ratio > out.value) {
      out.value = ratio;
      out.argmax = i;
      any = true;
    }
  }
  if (!any) throw Error(ErrorKind::AllSkipped, "every sampled ball has a vanishing denominator");
  return out;
}

}  // namespace mms

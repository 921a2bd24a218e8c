#include "mms/generators.hpp"

#include <cmath>
#include <numbers>

#include "mms/error.hpp"
#include "mms/quadrature.hpp"

namespace mms::gen {

SpaceGraph grid(int dim, int half_width, bool diagonals) {
  if (dim < 1 || half_width < 1) throw Error(ErrorKind::InvalidInput, "grid needs dim >= 1 and half-width >= 1");
  if (diagonals && dim != 2) throw Error(ErrorKind::InvalidInput, "diagonal edges are only generated in dimension 2");
  const Index side = 2 * half_width + 1;
  Index count = 1;
  for (int d = 0; d < dim; ++d) count *= side;
  Eigen::MatrixXd pos(dim, count);
  std::vector<Index> stride(static_cast<std::size_t>(dim), 1);
  for (int d = 1; d < dim; ++d) stride[d] = stride[d - 1] * side;
  for (Index v = 0; v < count; ++v) {
    Index rest = v;
    for (int d = 0; d < dim; ++d) {
      pos(d, v) = static_cast<double>(rest % side - half_width);
      rest /= side;
    }
  }
  std::vector<Edge> edges;
  for (Index v = 0; v < count; ++v) {
    for (int d = 0; d < dim; ++d) {
      if (pos(d, v) < half_width) edges.push_back({v, v + stride[d], 1.0});
    }
    if (diagonals) {
      const bool right = pos(0, v) < half_width;
      if (right && pos(1, v) < half_width) edges.push_back({v, v + 1 + side, std::numbers::sqrt2});
      if (right && pos(1, v) > -half_width) edges.push_back({v, v + 1 - side, std::numbers::sqrt2});
    }
  }
  Index base = 0;
  for (int d = 0; d < dim; ++d) base += half_width * stride[d];
  SpaceGraph g(NodeField::Ones(count), std::move(edges), base, {}, std::move(pos));
  g.kind = diagonals ? "grid8" : "grid";
  g.declared_class = AsymptoticClass::polynomial(dim);
  return g;
}

SpaceGraph halfline_from_positions(const std::vector<double>& positions, const RadialFunction& weight) {
  const Index n = static_cast<Index>(positions.size());
  if (n < 2 || positions.front() != 0.0) {
    throw Error(ErrorKind::InvalidInput, "half-line needs at least two positions starting at 0");
  }
  NodeField masses(n);
  std::vector<Edge> edges;
  Eigen::MatrixXd pos(1, n);
  for (Index k = 0; k < n; ++k) {
    if (k > 0 && !(positions[k] > positions[k - 1])) throw Error(ErrorKind::InvalidInput, "positions must increase");
    const double lo = k > 0 ? 0.5 * (positions[k - 1] + positions[k]) : positions[k];
    const double hi = k + 1 < n ? 0.5 * (positions[k] + positions[k + 1]) : positions[k];
    if (weight.rate == 0.0 && weight.exponent == 0.0) {
      masses[k] = weight.coeff * (hi - lo);
    } else {
      masses[k] = quad::adaptive_simpson([&](double t) { return weight(t); }, lo, hi, 1e-13 * (hi - lo), 4).value;
    }
    if (k + 1 < n) edges.push_back({k, k + 1, positions[k + 1] - positions[k]});
    pos(0, k) = positions[k];
  }
  SpaceGraph g(std::move(masses), std::move(edges), 0, {}, std::move(pos));
  g.kind = "halfline";
  if (weight.rate == 0.0 && weight.exponent > -1.0) g.declared_class = AsymptoticClass::polynomial(weight.exponent + 1.0);
  return g;
}

SpaceGraph halfline(double length, double step, const RadialFunction& weight) {
  if (!(length > 0.0) || !(step > 0.0)) throw Error(ErrorKind::InvalidInput, "half-line needs positive length and step");
  const Index n = static_cast<Index>(std::llround(length / step));
  std::vector<double> pts(static_cast<std::size_t>(n) + 1);
  for (Index k = 0; k <= n; ++k) pts[k] = k * step;
  return halfline_from_positions(pts, weight);
}

SpaceGraph dyadic_halfline(int octaves, int per_octave, const RadialFunction& weight) {
  if (octaves < 1 || per_octave < 1) throw Error(ErrorKind::InvalidInput, "dyadic half-line needs octaves, per_octave >= 1");
  std::vector<double> pts;
  for (int k = 0; k < per_octave; ++k) pts.push_back(static_cast<double>(k) / per_octave);
  for (int j = 0; j < octaves; ++j) {
    const double a = std::ldexp(1.0, j);
    for (int k = 0; k < per_octave; ++k) pts.push_back(a + a * k / per_octave);
  }
  pts.push_back(std::ldexp(1.0, octaves));
  return halfline_from_positions(pts, weight);
}

SpaceGraph two_ended_line(int half_length) {
  if (half_length < 1) throw Error(ErrorKind::InvalidInput, "line needs half-length >= 1");
  const Index n = 2 * half_length + 1;
  NodeField masses = NodeField::Ones(n);
  masses[0] = masses[n - 1] = 0.5;
  std::vector<Edge> edges;
  Eigen::MatrixXd pos(1, n);
  for (Index k = 0; k < n; ++k) {
    pos(0, k) = static_cast<double>(k - half_length);
    if (k + 1 < n) edges.push_back({k, k + 1, 1.0});
  }
  SpaceGraph g(std::move(masses), std::move(edges), half_length, {}, std::move(pos));
  g.kind = "line";
  g.declared_class = AsymptoticClass::polynomial(1.0);
  return g;
}

SpaceGraph tree(int K, int depth, double first_length, double ratio, TreeMass mass) {
  if (K < 1 || depth < 1) throw Error(ErrorKind::InvalidInput, "tree needs K >= 1 and depth >= 1");
  if (!(first_length > 0.0) || !(ratio > 0.0)) throw Error(ErrorKind::InvalidInput, "tree edge lengths must be positive");
  std::vector<Index> level_start{0};
  Index count = 1;
  Index width = 1;
  for (int k = 1; k <= depth; ++k) {
    width *= K;
    level_start.push_back(count);
    count += width;
    if (count > 50'000'000) throw Error(ErrorKind::InvalidInput, "tree too large");
  }
  level_start.push_back(count);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(count - 1));
  NodeField masses(count);
  for (int k = 0; k <= depth; ++k) {
    const double below = k > 0 ? first_length * std::pow(ratio, k - 1) : 0.0;
    const double above = k < depth ? first_length * std::pow(ratio, k) : 0.0;
    double m = 0.5 * (below + above);
    if (mass == TreeMass::Split) m /= std::pow(static_cast<double>(K), k);
    for (Index v = level_start[k]; v < level_start[k + 1]; ++v) {
      masses[v] = m;
      if (k < depth) {
        const Index first_child = level_start[k + 1] + (v - level_start[k]) * K;
        for (int c = 0; c < K; ++c) edges.push_back({v, first_child + c, above});
      }
    }
  }
  SpaceGraph g(std::move(masses), std::move(edges), 0);
  g.kind = "tree";
  if (mass == TreeMass::Split && ratio == 1.0) g.declared_class = AsymptoticClass::polynomial(1.0);
  else if (ratio == 1.0) g.declared_class = AsymptoticClass::exponential();
  return g;
}

}  // namespace mms::gen

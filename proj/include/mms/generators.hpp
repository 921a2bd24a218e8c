#pragma once

#include <vector>

#include "mms/graph.hpp"

namespace mms::gen {

/// Lattice {-h..h}^dim with unit spacing and unit node masses, based at
/// the origin. `diagonals` adds the 2-D diagonal edges of length sqrt(2).
SpaceGraph grid(int dim, int half_width, bool diagonals = false);

/// Path graph through the given increasing positions starting at 0.
/// Node masses are the Voronoi cell lengths weighted by `weight`.
SpaceGraph halfline_from_positions(const std::vector<double>& positions,
                                   const RadialFunction& weight = RadialFunction::constant(1.0));

/// Half-line [0, length] sampled at spacing `step`.
SpaceGraph halfline(double length, double step = 1.0,
                    const RadialFunction& weight = RadialFunction::constant(1.0));

/// Half-line with `per_octave` equally spaced nodes inside every dyadic
/// interval [2^j, 2^{j+1}), uniform spacing 1/per_octave on [0, 1].
SpaceGraph dyadic_halfline(int octaves, int per_octave,
                           const RadialFunction& weight = RadialFunction::constant(1.0));

/// Two-ended line {-n..n} with unit spacing based at 0.
SpaceGraph two_ended_line(int half_length);

enum class TreeMass {
  Voronoi,  // node mass = half the lengths of incident edges
  Split,    // Voronoi mass divided by K^depth, so each level weighs as a half-line
};

/// Rooted tree, K children per vertex, with edge length
/// first_length * ratio^k between depth k and depth k+1.
SpaceGraph tree(int K, int depth, double first_length = 1.0, double ratio = 1.0,
                TreeMass mass = TreeMass::Voronoi);

}  // namespace mms::gen

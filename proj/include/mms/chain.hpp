#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mms/graph.hpp"

namespace mms {

/// Constants of an annular lambda-chain: balls of radius r / (lambda c1),
/// contained in B(O, c2 r) \ B(O, r / c2), consecutive balls sharing a
/// ball of radius delta * r, at most M balls.
struct ChainConstants {
  double c1 = 1.0;
  double c2 = 1.0;
  double delta = 0.0;
  int M = 64;
};

/// Ball chain joining x to y at scale r: centers[0] = x, centers.back() = y,
/// overlaps[i] is the center of the shared ball between centers i and i+1.
struct BallChain {
  double r = 0.0;
  Index x = 0;
  Index y = 0;
  std::vector<Index> centers;
  std::vector<Index> overlaps;
};

struct ChainReport {
  enum class Outcome { Pass, Fail, Inconclusive };
  Outcome outcome = Outcome::Inconclusive;
  double lambda = 1.0;
  std::optional<ChainConstants> constants;  // set on pass
  std::vector<BallChain> chains;            // re-checkable witnesses on pass
  std::vector<double> tested_radii;
  std::vector<double> empty_radii;          // annulus B(O,r) \ B(O,r/2) empty
  std::size_t pairs_tested = 0;
  /// Failing pair (r, x, y) on Fail: no admissible ball centre path joins
  /// x to y under any searched constants.
  std::optional<std::pair<double, std::pair<Index, Index>>> witness;
  std::string note;
};

const char* to_string(ChainReport::Outcome o);

struct ChainSearch {
  std::vector<double> c_grid{1.0, 2.0, 4.0, 8.0, 16.0};
  int max_m = 6;       // delta = 1 / (2^m lambda c1), m = 1..max_m
  int max_chain = 64;  // M
};

/// Pairs of annulus nodes x, y in B(O,r) \ B(O,r/2), farthest pairs first
/// (farthest-point anchors, pairs in anchor creation order).
std::vector<std::pair<Index, Index>> sample_pairs(const SpaceGraph& g, double r, std::size_t budget);

/// Searches the constant grid in lexicographic (c1, c2, m) order for
/// constants under which every sampled pair at every radius is joined by a
/// chain built greedily along a shortest path of admissible ball centres.
ChainReport chain_check(const SpaceGraph& g, double lambda, std::span<const double> radii,
                        std::size_t pair_budget, const ChainSearch& search = {});

/// Same test with fixed constants (no search).
ChainReport chain_check_fixed(const SpaceGraph& g, double lambda, std::span<const double> radii,
                              std::size_t pair_budget, const ChainConstants& constants);

/// Exact node-set re-check of the four chain properties for a witness.
bool verify_chain(const SpaceGraph& g, double lambda, const ChainConstants& constants, const BallChain& chain);

}  // namespace mms

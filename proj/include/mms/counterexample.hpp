#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mms/graph.hpp"
#include "mms/model_spaces.hpp"

namespace mms {

/// Greedy block sequence for a profile with divergent dyadic series.
/// For p > 1 block k (k = 1..K) spans annuli n_k <= i < n_{k+1}, so the
/// blocks tile [n_1, n_{K+1}) without overlap, and indices holds
/// n_1..n_{K+1}. For p = 1 indices holds i_1..i_K.
struct BlockSequence {
  double p = 2.0;
  std::vector<int> indices;
  /// S_k for p > 1, 2^{i_k} / mu(A_{i_k}) for p = 1.
  std::vector<double> sums;
  int requested = 0;
  /// true when the stored prefix ran out before `requested` blocks.
  bool exhausted = false;
  std::size_t blocks() const { return sums.size(); }
};

struct GreedyOptions {
  /// n_1 (or the lower bound for i_1); the profile's first annulus when unset.
  std::optional<int> start;
  /// Build on a prefix whose series is Undecided instead of refusing.
  bool allow_undecided = true;
};

/// n_{k+1} - 1 is the least index with S_k > 2^k (p > 1); i_k is the least
/// index above i_{k-1} with 2^{i_k} / mu(A_{i_k}) > 2^k (p = 1). Throws
/// Precondition when the series is Finite.
BlockSequence greedy_blocks(const RadialProfile& profile, double p, int K, const GreedyOptions& opts = {});

struct BlockDensity {
  double p = 2.0;
  int j_min = 0;
  /// values[k] is the constant of g on annulus j_min + k.
  std::vector<double> values;
  /// int g^p dmu (p > 1) or int g dmu (p = 1), computed from the values.
  double budget = 0.0;
  /// S_k^{1-p} (p > 1) or 2^{-i_k} mu(A_{i_k}) (p = 1), one per block.
  std::vector<double> block_contributions;
  /// sum_{k<=K} 2^{-k(p-1)} (p > 1) or sum_{k<=K} 2^{-k}.
  double partial_bound = 0.0;
  /// 1 / (2^{p-1} - 1) (p > 1) or 1.
  double series_bound = 0.0;
  bool within_bound() const { return budget <= series_bound * (1.0 + 1e-12); }
  /// g on the annulus of radius r; zero off the blocks.
  double at_radius(double r) const;
};

BlockDensity build_density(const RadialProfile& profile, const BlockSequence& blocks);

/// u(x) = shortest-path distance from O with edge weights len(e)(g(a)+g(b))/2.
/// Throws ProfileMismatch when an annulus mass of the graph differs from
/// the profile by more than `tolerance` (relative).
NodeField distance_function(const SpaceGraph& g, const RadialProfile& profile, const BlockDensity& density,
                            double tolerance = 0.1);

/// Edge weights of the g-weighted metric (same order as g.edges()).
std::vector<double> density_edge_weights(const SpaceGraph& g, const BlockDensity& density);

struct RayCrossings {
  /// Radius d(O, v) of the first node on the ray with u(v) > M, per threshold.
  std::vector<std::optional<double>> radii;
  /// Index of that node along the ray.
  std::vector<std::optional<std::size_t>> positions;
  bool monotone = true;  // u non-decreasing along the ray
  double final_value = 0.0;
  double final_radius = 0.0;
  bool crossed_all() const;
};

struct DivergenceReport {
  std::vector<double> thresholds;
  std::vector<RayCrossings> rays;
  bool pass = false;
  std::string note;
};

/// For every ray and threshold, the first radius where u exceeds the
/// threshold. Rays must be walks starting at the base point; thresholds
/// strictly increasing.
DivergenceReport divergence_check(const SpaceGraph& g, const NodeField& u, std::span<const Path> rays,
                                  std::span<const double> thresholds);

/// Geodesic from the base point to v.
Path ray_to(const SpaceGraph& g, Index v);

}  // namespace mms

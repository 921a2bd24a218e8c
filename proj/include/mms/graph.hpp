#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mms/model_spaces.hpp"

namespace mms {

using Index = std::int64_t;
using NodeSet = std::vector<Index>;
using Path = std::vector<Index>;
using NodeField = Eigen::VectorXd;

struct Edge {
  Index u = 0;
  Index v = 0;
  double length = 1.0;
};

/// Finite connected weighted graph standing in for a metric measure space:
/// node masses, undirected edge lengths, a base point O and (for the
/// built-in generators) node coordinates. Immutable after construction;
/// the distance field from the base point is computed once.
class SpaceGraph {
 public:
  SpaceGraph(NodeField masses, std::vector<Edge> edges, Index base,
             std::vector<std::int64_t> ids = {}, Eigen::MatrixXd positions = {});

  Index size() const { return static_cast<Index>(masses_.size()); }
  Index base() const { return base_; }
  const NodeField& masses() const { return masses_; }
  double mass(Index v) const { return masses_[v]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::int64_t>& ids() const { return ids_; }
  /// dim x n coordinate matrix; empty when the graph carries no embedding.
  const Eigen::MatrixXd& positions() const { return positions_; }
  bool has_positions() const { return positions_.cols() == size(); }

  /// Neighbours of v as (node, edge length) pairs.
  struct Neighbor {
    Index node;
    double length;
  };
  std::span<const Neighbor> neighbors(Index v) const {
    return {adjacency_.data() + offsets_[v],
            static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
  }

  std::optional<double> edge_length(Index u, Index v) const;

  /// d(O, v) under the shortest-path metric.
  double radius(Index v) const { return base_distance_[v]; }
  const NodeField& base_distances() const { return base_distance_; }
  double max_radius() const { return base_distance_.maxCoeff(); }

  /// Optional declared tail behaviour of the annulus masses (used when a
  /// growth functional is evaluated directly on a graph).
  std::optional<AsymptoticClass> declared_class;
  /// Free-form generator tag echoed to JSON ("grid", "halfline", ...).
  std::string kind;

  Index index_of(std::int64_t id) const;

 private:
  NodeField masses_;
  std::vector<Edge> edges_;
  Index base_;
  std::vector<std::int64_t> ids_;
  Eigen::MatrixXd positions_;
  std::vector<Index> offsets_;
  std::vector<Neighbor> adjacency_;
  NodeField base_distance_;
};

/// Single-source shortest-path distances (Dijkstra); unreachable = +inf.
NodeField distances_from(const SpaceGraph& g, Index source);

/// Dijkstra with a caller-supplied nonnegative edge cost and an optional
/// cut-off: nodes with distance >= limit are left at +inf.
struct ShortestPathTree {
  NodeField dist;
  std::vector<Index> parent;  // -1 for sources and unreached nodes
  Path path_to(Index target) const;
};
using EdgeCost = std::function<double(Index u, Index v, double length)>;
ShortestPathTree shortest_paths(const SpaceGraph& g, std::span<const Index> sources,
                                const EdgeCost& cost, double limit = INFINITY,
                                const std::vector<char>* stop = nullptr);

/// Open ball {v : d(center, v) < r}, sorted by node index.
NodeSet ball(const SpaceGraph& g, Index center, double r);

/// Nodes with lo <= d(O, v) < hi.
NodeSet annulus(const SpaceGraph& g, double lo, double hi);

/// Trapezoidal line integral sum_e len(e) (f(u) + f(v)) / 2 along a walk.
/// Throws MalformedPath when consecutive nodes are not adjacent.
double line_integral(const SpaceGraph& g, std::span<const Index> path, const NodeField& f);

/// Total length of a walk.
double path_length(const SpaceGraph& g, std::span<const Index> path);

/// mu(A) for a node set.
double measure(const SpaceGraph& g, std::span<const Index> nodes);

/// Annulus masses mu({2^j <= d(O, .) < 2^{j+1}}) for j in [j_min, j_max],
/// restricted to annuli fully covered by the graph (2^{j+1} <= max radius).
RadialProfile graph_profile(const SpaceGraph& g, int j_min = 0, int j_max = -1);

}  // namespace mms

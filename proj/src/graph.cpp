#include "mms/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "mms/error.hpp"

namespace mms {

SpaceGraph::SpaceGraph(NodeField masses, std::vector<Edge> edges, Index base,
                       std::vector<std::int64_t> ids, Eigen::MatrixXd positions)
    : masses_(std::move(masses)),
      edges_(std::move(edges)),
      base_(base),
      ids_(std::move(ids)),
      positions_(std::move(positions)) {
  const Index n = size();
  if (n == 0) throw Error(ErrorKind::InvalidInput, "graph has no nodes");
  for (Index v = 0; v < n; ++v) {
    if (!(masses_[v] > 0.0) || !std::isfinite(masses_[v])) {
      throw Error(ErrorKind::InvalidInput, "node mass must be positive and finite (node " + std::to_string(v) + ")");
    }
  }
  if (base_ < 0 || base_ >= n) throw Error(ErrorKind::InvalidInput, "base node out of range");
  if (ids_.empty()) {
    ids_.resize(static_cast<std::size_t>(n));
    std::iota(ids_.begin(), ids_.end(), 0);
  }
  if (static_cast<Index>(ids_.size()) != n) throw Error(ErrorKind::InvalidInput, "id list size mismatch");
  if (positions_.size() != 0 && positions_.cols() != n) {
    throw Error(ErrorKind::InvalidInput, "position matrix must have one column per node");
  }

  std::vector<Index> degree(static_cast<std::size_t>(n), 0);
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) throw Error(ErrorKind::InvalidInput, "edge endpoint out of range");
    if (e.u == e.v) throw Error(ErrorKind::InvalidInput, "self loops are not allowed");
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw Error(ErrorKind::InvalidInput, "edge length must be positive and finite");
    }
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Index v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(static_cast<std::size_t>(offsets_[n]));
  std::vector<Index> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[fill[e.u]++] = {e.v, e.length};
    adjacency_[fill[e.v]++] = {e.u, e.length};
  }
  for (Index v = 0; v < n; ++v) {
    auto first = adjacency_.begin() + offsets_[v];
    auto last = adjacency_.begin() + offsets_[v + 1];
    std::sort(first, last, [](const Neighbor& a, const Neighbor& b) {
      return a.node != b.node ? a.node < b.node : a.length < b.length;
    });
    for (auto it = first; it != last && it + 1 != last; ++it) {
      if (it->node == (it + 1)->node) throw Error(ErrorKind::InvalidInput, "duplicate edge");
    }
  }

  base_distance_ = distances_from(*this, base_);
  for (Index v = 0; v < n; ++v) {
    if (!std::isfinite(base_distance_[v])) throw Error(ErrorKind::InvalidInput, "graph is not connected");
  }
}

std::optional<double> SpaceGraph::edge_length(Index u, Index v) const {
  if (u < 0 || u >= size() || v < 0 || v >= size()) return std::nullopt;
  const auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v, [](const Neighbor& a, Index x) { return a.node < x; });
  if (it == nb.end() || it->node != v) return std::nullopt;
  return it->length;
}

Index SpaceGraph::index_of(std::int64_t id) const {
  for (Index v = 0; v < size(); ++v) {
    if (ids_[v] == id) return v;
  }
  throw Error(ErrorKind::InvalidInput, "unknown node id " + std::to_string(id));
}

Path ShortestPathTree::path_to(Index target) const {
  Path path;
  for (Index v = target; v >= 0; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

ShortestPathTree shortest_paths(const SpaceGraph& g, std::span<const Index> sources, const EdgeCost& cost,
                                double limit, const std::vector<char>* stop) {
  const Index n = g.size();
  ShortestPathTree tree;
  tree.dist = NodeField::Constant(n, std::numeric_limits<double>::infinity());
  tree.parent.assign(static_cast<std::size_t>(n), -1);
  using Item = std::pair<double, Index>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (Index s : sources) {
    if (tree.dist[s] > 0.0) {
      tree.dist[s] = 0.0;
      heap.emplace(0.0, s);
    }
  }
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > tree.dist[u]) continue;
    if (stop && (*stop)[u]) continue;
    for (const auto& nb : g.neighbors(u)) {
      const double nd = d + (cost ? cost(u, nb.node, nb.length) : nb.length);
      if (nd < tree.dist[nb.node] && nd < limit) {
        tree.dist[nb.node] = nd;
        tree.parent[nb.node] = u;
        heap.emplace(nd, nb.node);
      }
    }
  }
  return tree;
}

NodeField distances_from(const SpaceGraph& g, Index source) {
  const Index src[] = {source};
  return shortest_paths(g, src, nullptr).dist;
}

NodeSet ball(const SpaceGraph& g, Index center, double r) {
  NodeSet out;
  if (r <= 0.0) return out;
  const Index src[] = {center};
  const auto tree = shortest_paths(g, src, nullptr, r);
  for (Index v = 0; v < g.size(); ++v) {
    if (tree.dist[v] < r) out.push_back(v);
  }
  return out;
}

NodeSet annulus(const SpaceGraph& g, double lo, double hi) {
  NodeSet out;
  for (Index v = 0; v < g.size(); ++v) {
    const double d = g.radius(v);
    if (d >= lo && d < hi) out.push_back(v);
  }
  return out;
}

double line_integral(const SpaceGraph& g, std::span<const Index> path, const NodeField& f) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const auto len = g.edge_length(path[k], path[k + 1]);
    if (!len) {
      throw Error(ErrorKind::MalformedPath, "path uses a non-edge (" + std::to_string(path[k]) + ", " +
                                                std::to_string(path[k + 1]) + ")");
    }
    total += *len * 0.5 * (f[path[k]] + f[path[k + 1]]);
  }
  return total;
}

double path_length(const SpaceGraph& g, std::span<const Index> path) {
  return line_integral(g, path, NodeField::Ones(g.size()));
}

double measure(const SpaceGraph& g, std::span<const Index> nodes) {
  double m = 0.0;
  for (Index v : nodes) m += g.mass(v);
  return m;
}

RadialProfile graph_profile(const SpaceGraph& g, int j_min, int j_max) {
  const double rmax = g.max_radius();
  if (j_max < 0) j_max = static_cast<int>(std::floor(std::log2(rmax))) - 1;
  RadialProfile profile;
  profile.j_min = j_min;
  profile.asymptotic = g.declared_class.value_or(AsymptoticClass::unknown());
  std::vector<double> masses(static_cast<std::size_t>(std::max(0, j_max - j_min + 1)), 0.0);
  for (Index v = 0; v < g.size(); ++v) {
    const double d = g.radius(v);
    if (d <= 0.0) continue;
    const int j = static_cast<int>(std::floor(std::log2(d)));
    if (j >= j_min && j <= j_max) masses[j - j_min] += g.mass(v);
  }
  for (int j = j_min; j <= j_max; ++j) {
    if (std::ldexp(1.0, j + 1) > rmax + 1e-12 || masses[j - j_min] <= 0.0) {
      masses.resize(static_cast<std::size_t>(j - j_min));
      break;
    }
  }
  profile.masses = std::move(masses);
  return profile;
}

}  // namespace mms

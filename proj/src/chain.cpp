#include "mms/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "mms/error.hpp"

namespace mms {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dijkstra truncated at a radius, with versioned storage so repeated small
// balls do not pay for clearing a graph-sized array.
class LocalBall {
 public:
  explicit LocalBall(const SpaceGraph& g)
      : g_(g), dist_(static_cast<std::size_t>(g.size()), kInf), stamp_(static_cast<std::size_t>(g.size()), 0) {}

  // nodes with d(c, v) < r, in order of discovery
  const std::vector<Index>& run(Index c, double r) {
    ++epoch_;
    reached_.clear();
    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    set(c, 0.0);
    heap.emplace(0.0, c);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > get(u)) continue;
      reached_.push_back(u);
      for (const auto& nb : g_.neighbors(u)) {
        const double nd = d + nb.length;
        if (nd < r && nd < get(nb.node)) {
          set(nb.node, nd);
          heap.emplace(nd, nb.node);
        }
      }
    }
    if (r <= 0.0) reached_.clear();
    return reached_;
  }

  double get(Index v) const { return stamp_[v] == epoch_ ? dist_[v] : kInf; }

 private:
  void set(Index v, double d) {
    stamp_[v] = epoch_;
    dist_[v] = d;
  }
  const SpaceGraph& g_;
  std::vector<double> dist_;
  std::vector<unsigned> stamp_;
  unsigned epoch_ = 0;
  std::vector<Index> reached_;
};

struct Scale {
  double ball;     // r / (lambda c1)
  double overlap;  // delta r
  double lo;       // r / c2
  double hi;       // c2 r
};

enum class Attempt { Found, Disconnected, TooLong };

class ChainBuilder {
 public:
  ChainBuilder(const SpaceGraph& g) : g_(g), a_(g), b_(g) {}

  void reset(const Scale& s) {
    s_ = s;
    valid_.assign(static_cast<std::size_t>(g_.size()), -1);
  }

  bool valid(Index c) {
    signed char& v = valid_[c];
    if (v >= 0) return v != 0;
    const double d = g_.radius(c);
    if (d < s_.lo || d >= s_.hi) {
      v = 0;
    } else if (d - s_.ball >= s_.lo && d + s_.ball <= s_.hi) {
      v = 1;
    } else {
      v = 1;
      for (Index u : a_.run(c, s_.ball)) {
        const double du = g_.radius(u);
        if (du < s_.lo || du >= s_.hi) {
          v = 0;
          break;
        }
      }
    }
    return v != 0;
  }

  // shortest path between x and y through admissible centres
  std::optional<Path> centre_path(Index x, Index y) {
    if (!valid(x) || !valid(y)) return std::nullopt;
    std::map<Index, double> dist;
    std::map<Index, Index> parent;
    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[x] = 0.0;
    heap.emplace(0.0, x);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      if (u == y) break;
      for (const auto& nb : g_.neighbors(u)) {
        if (!valid(nb.node)) continue;
        const double nd = d + nb.length;
        auto it = dist.find(nb.node);
        if (it == dist.end() || nd < it->second) {
          dist[nb.node] = nd;
          parent[nb.node] = u;
          heap.emplace(nd, nb.node);
        }
      }
    }
    if (!dist.count(y)) return std::nullopt;
    Path path{y};
    for (Index v = y; v != x;) {
      v = parent.at(v);
      path.push_back(v);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  Attempt build(double r, Index x, Index y, int M, BallChain& chain) {
    chain = BallChain{r, x, y, {x}, {}};
    if (x == y) return Attempt::Found;
    const auto path = centre_path(x, y);
    if (!path) return Attempt::Disconnected;
    const Path& P = *path;
    // arc length along the path
    std::vector<double> arc(P.size(), 0.0);
    for (std::size_t k = 1; k < P.size(); ++k) arc[k] = arc[k - 1] + *g_.edge_length(P[k - 1], P[k]);

    std::size_t i = 0;
    const double reach = s_.ball - s_.overlap;
    while (i + 1 < P.size()) {
      if (static_cast<int>(chain.centers.size()) >= M) return Attempt::TooLong;
      const std::vector<Index> near = a_.run(P[i], reach > 0.0 ? reach + 1e-12 * s_.ball : 0.0);
      std::size_t j = i + 1;
      while (j + 1 < P.size() && arc[j + 1] - arc[i] < 2.0 * s_.ball) ++j;
      bool placed = false;
      for (; j > i; --j) {
        b_.run(P[j], s_.ball);
        for (Index z : near) {
          if (a_.get(z) + s_.overlap <= s_.ball && b_.get(z) + s_.overlap <= s_.ball) {
            chain.centers.push_back(P[j]);
            chain.overlaps.push_back(z);
            placed = true;
            break;
          }
        }
        if (placed) break;
      }
      if (!placed) return Attempt::TooLong;
      i = j;
    }
    if (static_cast<int>(chain.centers.size()) > M) return Attempt::TooLong;
    return Attempt::Found;
  }

 private:
  const SpaceGraph& g_;
  LocalBall a_;
  LocalBall b_;
  Scale s_{};
  std::vector<signed char> valid_;
};

Scale scale_for(double r, double lambda, const ChainConstants& k) {
  return {r / (lambda * k.c1), k.delta * r, r / k.c2, k.c2 * r};
}

void check_inputs(const SpaceGraph& g, double lambda, std::span<const double> radii) {
  if (!(lambda >= 1.0)) throw Error(ErrorKind::InvalidInput, "lambda must be >= 1");
  for (double r : radii) {
    if (!(r > 0.0)) throw Error(ErrorKind::InvalidInput, "chain radii must be positive");
  }
  (void)g;
}

struct Task {
  double r;
  std::vector<std::pair<Index, Index>> pairs;
};

std::vector<Task> make_tasks(const SpaceGraph& g, std::span<const double> radii, std::size_t budget,
                             ChainReport& rep) {
  std::vector<Task> tasks;
  for (double r : radii) {
    rep.tested_radii.push_back(r);
    auto pairs = sample_pairs(g, r, budget);
    if (pairs.empty()) {
      rep.empty_radii.push_back(r);
      continue;
    }
    rep.pairs_tested += pairs.size();
    tasks.push_back({r, std::move(pairs)});
  }
  return tasks;
}

// every pair at every radius under one set of constants
bool run_constants(ChainBuilder& builder, const std::vector<Task>& tasks, double lambda, const ChainConstants& k,
                   std::vector<BallChain>& chains, int& longest) {
  chains.clear();
  longest = 0;
  for (const Task& t : tasks) {
    builder.reset(scale_for(t.r, lambda, k));
    for (const auto& [x, y] : t.pairs) {
      BallChain chain;
      if (builder.build(t.r, x, y, k.M, chain) != Attempt::Found) return false;
      longest = std::max(longest, static_cast<int>(chain.centers.size()));
      chains.push_back(std::move(chain));
    }
  }
  return true;
}

}  // namespace

const char* to_string(ChainReport::Outcome o) {
  switch (o) {
    case ChainReport::Outcome::Pass: return "pass";
    case ChainReport::Outcome::Fail: return "fail";
    case ChainReport::Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<std::pair<Index, Index>> sample_pairs(const SpaceGraph& g, double r, std::size_t budget) {
  const NodeSet ring = annulus(g, r / 2.0, r);
  std::vector<std::pair<Index, Index>> pairs;
  if (ring.empty() || budget == 0) return pairs;
  std::vector<Index> anchors{ring.front()};
  NodeField nearest = NodeField::Constant(g.size(), kInf);
  auto absorb = [&](Index a) {
    const NodeField d = distances_from(g, a);
    nearest = nearest.cwiseMin(d);
  };
  absorb(ring.front());
  while (pairs.size() < budget) {
    Index next = -1;
    double far = -1.0;
    for (Index v : ring) {
      if (nearest[v] > far) {
        far = nearest[v];
        next = v;
      }
    }
    if (far <= 0.0) break;  // every ring node is already an anchor
    for (Index a : anchors) {
      if (pairs.size() >= budget) break;
      pairs.emplace_back(a, next);
    }
    anchors.push_back(next);
    absorb(next);
  }
  if (pairs.empty()) pairs.emplace_back(ring.front(), ring.front());
  return pairs;
}

ChainReport chain_check(const SpaceGraph& g, double lambda, std::span<const double> radii,
                        std::size_t pair_budget, const ChainSearch& search) {
  check_inputs(g, lambda, radii);
  ChainReport rep;
  rep.lambda = lambda;
  const std::vector<Task> tasks = make_tasks(g, radii, pair_budget, rep);
  if (tasks.empty()) {
    rep.outcome = ChainReport::Outcome::Inconclusive;
    rep.note = "every tested annulus is empty";
    return rep;
  }
  ChainBuilder builder(g);
  std::vector<ChainConstants> grid;
  for (double c1 : search.c_grid)
    for (double c2 : search.c_grid)
      for (int m = 1; m <= search.max_m; ++m)
        grid.push_back({c1, c2, 1.0 / (std::ldexp(1.0, m) * lambda * c1), search.max_chain});

  for (const ChainConstants& k : grid) {
    std::vector<BallChain> chains;
    int longest = 0;
    if (run_constants(builder, tasks, lambda, k, chains, longest)) {
      rep.outcome = ChainReport::Outcome::Pass;
      ChainConstants found = k;
      found.M = longest;
      rep.constants = found;
      rep.chains = std::move(chains);
      return rep;
    }
  }

  // classify: a pair with no admissible centre path under any constants is a failure
  for (const Task& t : tasks) {
    for (const auto& [x, y] : t.pairs) {
      bool joined = false;
      for (double c1 : search.c_grid) {
        for (double c2 : search.c_grid) {
          ChainConstants k{c1, c2, 0.0, search.max_chain};
          builder.reset(scale_for(t.r, lambda, k));
          if (builder.centre_path(x, y)) {
            joined = true;
            break;
          }
        }
        if (joined) break;
      }
      if (!joined) {
        rep.outcome = ChainReport::Outcome::Fail;
        rep.witness = std::make_pair(t.r, std::make_pair(x, y));
        rep.note = "no admissible ball centres join the witness pair inside any searched annulus";
        return rep;
      }
    }
  }
  rep.outcome = ChainReport::Outcome::Inconclusive;
  rep.note = "pairs are joined by admissible centres but no chain within M balls was found";
  return rep;
}

ChainReport chain_check_fixed(const SpaceGraph& g, double lambda, std::span<const double> radii,
                              std::size_t pair_budget, const ChainConstants& constants) {
  check_inputs(g, lambda, radii);
  if (!(constants.c1 >= 1.0) || !(constants.c2 >= 1.0) || !(constants.delta > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "chain constants need c1, c2 >= 1 and delta > 0");
  }
  ChainReport rep;
  rep.lambda = lambda;
  const std::vector<Task> tasks = make_tasks(g, radii, pair_budget, rep);
  ChainBuilder builder(g);
  std::vector<BallChain> chains;
  int longest = 0;
  if (run_constants(builder, tasks, lambda, constants, chains, longest)) {
    rep.outcome = ChainReport::Outcome::Pass;
    ChainConstants found = constants;
    found.M = longest;
    rep.constants = found;
    rep.chains = std::move(chains);
  } else {
    rep.outcome = ChainReport::Outcome::Inconclusive;
    rep.note = "no chain under the given constants";
  }
  return rep;
}

bool verify_chain(const SpaceGraph& g, double lambda, const ChainConstants& k, const BallChain& chain) {
  const Scale s = scale_for(chain.r, lambda, k);
  if (chain.centers.empty() || static_cast<int>(chain.centers.size()) > k.M) return false;
  if (chain.centers.front() != chain.x || chain.centers.back() != chain.y) return false;
  if (chain.overlaps.size() + 1 != chain.centers.size()) return false;
  std::vector<NodeSet> balls;
  for (Index c : chain.centers) {
    NodeSet b = ball(g, c, s.ball);
    for (Index v : b) {
      const double d = g.radius(v);
      if (d < s.lo || d >= s.hi) return false;
    }
    balls.push_back(std::move(b));
  }
  for (std::size_t i = 0; i < chain.overlaps.size(); ++i) {
    const NodeSet d = ball(g, chain.overlaps[i], s.overlap);
    for (Index v : d) {
      if (!std::binary_search(balls[i].begin(), balls[i].end(), v)) return false;
      if (!std::binary_search(balls[i + 1].begin(), balls[i + 1].end(), v)) return false;
    }
  }
  return true;
}

}  // namespace mms

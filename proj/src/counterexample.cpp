#include "mms/counterexample.hpp"

#include <cmath>

#include "mms/error.hpp"
#include "mms/growth.hpp"

namespace mms {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// log of the series term: (p/(p-1)) j ln 2 - ln mu_j / (p-1), or j ln 2 - ln mu_j at p = 1
double log_term(const RadialProfile& profile, int j, double p) {
  const double lm = std::log(profile.mass(j));
  if (p == 1.0) return j * kLn2 - lm;
  return (p / (p - 1.0)) * j * kLn2 - lm / (p - 1.0);
}

double checked_exp(double x) {
  const double v = std::exp(x);
  if (!std::isfinite(v)) throw Error(ErrorKind::Overflow, "block sum not representable in double precision");
  return v;
}

int annulus_of(double r) { return static_cast<int>(std::floor(std::log2(r))); }

}  // namespace

BlockSequence greedy_blocks(const RadialProfile& profile, double p, int K, const GreedyOptions& opts) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidInput, "p must be a finite real >= 1");
  if (K < 1) throw Error(ErrorKind::InvalidInput, "block count must be positive");
  profile.validate();
  const GrowthReport series = script_R(profile, p);
  if (series.finite()) {
    throw Error(ErrorKind::Precondition, "the dyadic series is finite; no divergent block sequence exists");
  }
  if (series.kind == GrowthReport::Kind::Undecided && !opts.allow_undecided) {
    throw Error(ErrorKind::Precondition, "the dyadic series is undecided for this profile");
  }
  const int start = opts.start.value_or(profile.j_min);
  if (start < profile.j_min || start > profile.j_max()) {
    throw Error(ErrorKind::InvalidInput, "block start index outside the stored profile");
  }

  BlockSequence out;
  out.p = p;
  out.requested = K;
  if (p == 1.0) {
    int i = start;
    for (int k = 1; k <= K; ++k) {
      const double target = k * kLn2;
      while (i <= profile.j_max() && !(log_term(profile, i, p) > target)) ++i;
      if (i > profile.j_max()) {
        out.exhausted = true;
        break;
      }
      out.indices.push_back(i);
      out.sums.push_back(checked_exp(log_term(profile, i, p)));
      ++i;
    }
    return out;
  }

  out.indices.push_back(start);
  int n = start;
  for (int k = 1; k <= K; ++k) {
    const double target = std::ldexp(1.0, k);
    double S = 0.0;
    int i = n;
    for (; i <= profile.j_max(); ++i) {
      S += checked_exp(log_term(profile, i, p));
      if (S > target) break;
    }
    if (i > profile.j_max()) {
      out.exhausted = true;
      break;
    }
    n = i + 1;
    out.indices.push_back(n);
    out.sums.push_back(S);
  }
  return out;
}

double BlockDensity::at_radius(double r) const {
  if (!(r >= std::ldexp(1.0, j_min))) return 0.0;
  const int k = annulus_of(r) - j_min;
  if (k < 0 || k >= static_cast<int>(values.size())) return 0.0;
  return values[static_cast<std::size_t>(k)];
}

BlockDensity build_density(const RadialProfile& profile, const BlockSequence& blocks) {
  profile.validate();
  const double p = blocks.p;
  BlockDensity d;
  d.p = p;
  d.j_min = profile.j_min;
  d.values.assign(profile.masses.size(), 0.0);
  auto slot = [&](int j) -> double& {
    if (j < profile.j_min || j > profile.j_max()) {
      throw Error(ErrorKind::InvalidInput, "block index outside the profile");
    }
    return d.values[static_cast<std::size_t>(j - profile.j_min)];
  };

  if (p == 1.0) {
    for (std::size_t k = 0; k < blocks.indices.size(); ++k) {
      const int i = blocks.indices[k];
      slot(i) += std::ldexp(1.0, -i);
      d.block_contributions.push_back(std::ldexp(profile.mass(i), -i));
      d.partial_bound += std::ldexp(1.0, -static_cast<int>(k + 1));
    }
    for (std::size_t j = 0; j < d.values.size(); ++j) d.budget += d.values[j] * profile.masses[j];
    d.series_bound = 1.0;
    return d;
  }

  if (blocks.indices.size() != blocks.sums.size() + 1) {
    throw Error(ErrorKind::InvalidInput, "block sequence needs one more index than block sums");
  }
  for (std::size_t k = 0; k < blocks.sums.size(); ++k) {
    const double logS = std::log(blocks.sums[k]);
    for (int i = blocks.indices[k]; i < blocks.indices[k + 1]; ++i) {
      // (2^i)^{1/(p-1)} mu^{1/(1-p)} / S_k = term_i / (2^i S_k)
      slot(i) += std::exp(log_term(profile, i, p) - i * kLn2 - logS);
    }
    d.block_contributions.push_back(std::pow(blocks.sums[k], 1.0 - p));
    d.partial_bound += std::pow(2.0, -static_cast<double>(k + 1) * (p - 1.0));
  }
  for (std::size_t j = 0; j < d.values.size(); ++j) d.budget += std::pow(d.values[j], p) * profile.masses[j];
  d.series_bound = 1.0 / (std::pow(2.0, p - 1.0) - 1.0);
  return d;
}

std::vector<double> density_edge_weights(const SpaceGraph& g, const BlockDensity& density) {
  std::vector<double> w;
  w.reserve(g.edges().size());
  for (const Edge& e : g.edges()) {
    w.push_back(e.length * 0.5 * (density.at_radius(g.radius(e.u)) + density.at_radius(g.radius(e.v))));
  }
  return w;
}

NodeField distance_function(const SpaceGraph& g, const RadialProfile& profile, const BlockDensity& density,
                            double tolerance) {
  const RadialProfile mine = graph_profile(g, profile.j_min);
  const std::size_t common = std::min(mine.masses.size(), profile.masses.size());
  for (std::size_t k = 0; k < common; ++k) {
    const double rel = std::abs(mine.masses[k] - profile.masses[k]) / profile.masses[k];
    if (rel > tolerance) {
      throw Error(ErrorKind::ProfileMismatch, "annulus " + std::to_string(profile.j_min + static_cast<int>(k)) +
                                                  " of the graph differs from the profile by " +
                                                  std::to_string(rel * 100.0) + "%");
    }
  }
  NodeField node_g(g.size());
  for (Index v = 0; v < g.size(); ++v) node_g[v] = density.at_radius(g.radius(v));
  const Index base = g.base();
  const auto tree = shortest_paths(g, std::span<const Index>(&base, 1),
                                   [&](Index a, Index b, double len) { return len * 0.5 * (node_g[a] + node_g[b]); });
  return tree.dist;
}

bool RayCrossings::crossed_all() const {
  for (const auto& r : radii) {
    if (!r) return false;
  }
  return true;
}

DivergenceReport divergence_check(const SpaceGraph& g, const NodeField& u, std::span<const Path> rays,
                                  std::span<const double> thresholds) {
  if (u.size() != g.size()) throw Error(ErrorKind::InvalidInput, "u must have one value per node");
  if (thresholds.empty()) throw Error(ErrorKind::InvalidInput, "no thresholds");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1])) throw Error(ErrorKind::InvalidInput, "thresholds must increase");
  }
  DivergenceReport rep;
  rep.thresholds.assign(thresholds.begin(), thresholds.end());
  rep.pass = !rays.empty();
  for (const Path& ray : rays) {
    if (ray.empty() || ray.front() != g.base()) {
      throw Error(ErrorKind::MalformedPath, "rays must start at the base point");
    }
    for (std::size_t k = 1; k < ray.size(); ++k) {
      if (!g.edge_length(ray[k - 1], ray[k])) throw Error(ErrorKind::MalformedPath, "ray uses a non-edge");
    }
    RayCrossings c;
    c.radii.assign(thresholds.size(), std::nullopt);
    c.positions.assign(thresholds.size(), std::nullopt);
    std::size_t next = 0;
    for (std::size_t k = 0; k < ray.size(); ++k) {
      const double val = u[ray[k]];
      if (k > 0 && val < u[ray[k - 1]]) c.monotone = false;
      while (next < thresholds.size() && val > thresholds[next]) {
        c.radii[next] = g.radius(ray[k]);
        c.positions[next] = k;
        ++next;
      }
    }
    c.final_value = u[ray.back()];
    c.final_radius = g.radius(ray.back());
    if (!c.crossed_all()) rep.pass = false;
    rep.rays.push_back(std::move(c));
  }
  if (!rep.pass) {
    rep.note = rays.empty() ? "no rays supplied"
                            : "truncation too small: some ray ends before crossing the largest threshold";
  }
  return rep;
}

Path ray_to(const SpaceGraph& g, Index v) {
  const Index base = g.base();
  const auto tree = shortest_paths(g, std::span<const Index>(&base, 1), [](Index, Index, double len) { return len; });
  return tree.path_to(v);
}

}  // namespace mms

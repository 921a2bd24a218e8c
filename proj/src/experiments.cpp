#include "mms/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "mms/counterexample.hpp"
#include "mms/error.hpp"

namespace mms {

const char* to_string(Trend t) {
  switch (t) {
    case Trend::Bounded: return "bounded";
    case Trend::Decaying: return "decaying";
    case Trend::Inconclusive: return "inconclusive";
  }
  return "?";
}

TrendFit classify_trend(std::span<const double> radii, std::span<const double> values, const TrendRule& rule) {
  if (radii.size() != values.size()) throw Error(ErrorKind::InvalidInput, "one value per radius");
  TrendFit fit;
  if (values.size() < 3) return fit;
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) return fit;
  }
  // both tests look at the last three radii; the first radii carry the
  // inner-boundary transient
  const std::size_t n = values.size(), first = n - 3;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    mx += std::log(radii[i]);
    my += std::log(values[i]);
  }
  mx /= 3.0;
  my /= 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    const double dx = std::log(radii[i]) - mx;
    sxy += dx * (std::log(values[i]) - my);
    sxx += dx * dx;
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const auto tail = values.subspan(first);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  fit.tail_spread = *hi / *lo;
  const bool bounded = fit.tail_spread <= rule.bounded_spread && *lo > rule.floor;
  const bool decaying = fit.slope < rule.decay_slope;
  if (bounded && !decaying) fit.trend = Trend::Bounded;
  else if (decaying && !bounded) fit.trend = Trend::Decaying;
  return fit;
}

namespace {

// greedy_blocks success on four blocks, with the refusal reason otherwise
bool constructible(const RadialProfile& profile, double p, std::string& note) {
  try {
    const BlockSequence b = greedy_blocks(profile, p, 4);
    if (b.exhausted) {
      note = "stored prefix exhausted after " + std::to_string(b.blocks()) + " blocks";
      return false;
    }
    note = "4 blocks";
    return true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Precondition) throw;
    note = e.what();
    return false;
  }
}

}  // namespace

Thm12Row thm12_probe(const Thm12Case& c, const ModulusOptions& opts) {
  if (c.graph == nullptr) throw Error(ErrorKind::InvalidInput, "thm12 case without a graph");
  Thm12Row row;
  row.name = c.name;
  row.p = c.p;
  row.series = script_R(c.profile, c.p);
  row.condensers = condenser_sequence(*c.graph, c.p, c.radii, opts);
  std::vector<double> values;
  for (const auto& s : row.condensers) values.push_back(s.result.value);
  TrendRule rule;
  rule.floor = 10.0 * opts.admissibility_tol;
  row.trend = classify_trend(c.radii, values, rule);
  row.blocks_constructible = constructible(c.profile, c.p, row.blocks_note);

  switch (row.series.kind) {
    case GrowthReport::Kind::Finite:
      row.consistent = row.trend.trend == Trend::Bounded && !row.blocks_constructible;
      break;
    case GrowthReport::Kind::Divergent:
      row.consistent = row.trend.trend == Trend::Decaying && row.blocks_constructible;
      break;
    case GrowthReport::Kind::Undecided:
      row.consistent = false;
      row.note = "series undecided for the declared class; ";
      break;
  }
  if (row.trend.trend == Trend::Inconclusive) row.note += "condenser trend inconclusive; ";
  for (const auto& s : row.condensers) {
    if (s.result.status != ModulusResult::Status::Converged) {
      row.note += "condenser R=" + std::to_string(s.radius) + " not converged; ";
    }
  }
  return row;
}

Thm13Row thm13_sandwich(const Thm13Case& c, const ModulusOptions& opts) {
  if (c.graph == nullptr || c.system == nullptr) throw Error(ErrorKind::InvalidInput, "thm13 case needs a graph and a system");
  Thm13Row row;
  row.name = c.name;
  row.p = c.p;
  row.weighted = R_weight(c.space, c.h, c.p, c.weight_radius);

  RadialProfile profile = annulus_masses(c.space, c.profile_levels);
  row.series = script_R(profile, c.p);
  std::string why;
  row.blocks_constructible = constructible(profile, c.p, why);

  if (c.hat_values.size() == c.radii.size()) {
    row.hat_values = c.hat_values;
  } else {
    std::vector<std::size_t> all(c.system->curves.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const HatFamily hat = hat_truncate(*c.system, all);
    if (!hat.reentries.empty()) row.note += std::to_string(hat.reentries.size()) + " curves re-enter B(O,1); ";
    for (double R : c.radii) {
      const PolarSystem cut = truncate_at(hat.system, R);
      const ExplicitPaths family = graph_paths(*c.graph, cut);
      const ModulusResult m = modulus(*c.graph, family, c.p, opts);
      if (m.status != ModulusResult::Status::Converged) row.note += "hat modulus R=" + std::to_string(R) + " not converged; ";
      row.hat_values.push_back(m.value);
    }
  }
  TrendRule rule;
  rule.floor = 10.0 * opts.admissibility_tol;
  row.trend = classify_trend(c.radii, row.hat_values, rule);

  if (row.weighted.finite() && row.trend.trend == Trend::Decaying) {
    row.violation = true;
    row.note += "finite weighted integral with a decaying hat modulus; ";
  }
  if (row.trend.trend == Trend::Bounded && row.series.divergent()) {
    row.violation = true;
    row.note += "bounded hat modulus with a divergent series; ";
  }
  if (row.blocks_constructible && row.series.finite()) {
    row.violation = true;
    row.note += "blocks built for a finite series; ";
  }
  return row;
}

TwoEndsDemo two_ends_demo(const SpaceGraph& g, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidInput, "p must be >= 1");
  const Index O = g.base();
  // components of the graph with the base point removed
  std::vector<int> comp(static_cast<std::size_t>(g.size()), -1);
  int ncomp = 0;
  for (const auto& start : g.neighbors(O)) {
    if (comp[start.node] >= 0) continue;
    std::vector<Index> stack{start.node};
    comp[start.node] = ncomp;
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(v)) {
        if (nb.node == O || comp[nb.node] >= 0) continue;
        comp[nb.node] = ncomp;
        stack.push_back(nb.node);
      }
    }
    ++ncomp;
  }
  if (ncomp < 2) throw Error(ErrorKind::Precondition, "the base point does not separate two ends");

  TwoEndsDemo out;
  out.ends = static_cast<std::size_t>(ncomp);
  out.u = NodeField::Constant(g.size(), 0.5);
  for (Index v = 0; v < g.size(); ++v) {
    const double t = std::min(g.radius(v), 1.0);
    if (comp[v] == 0) out.u[v] = 0.5 - 0.5 * t;
    if (comp[v] == 1) out.u[v] = 0.5 + 0.5 * t;
  }
  out.upper_gradient = NodeField::Zero(g.size());
  for (const Edge& e : g.edges()) {
    const double slope = std::abs(out.u[e.u] - out.u[e.v]) / e.length;
    out.upper_gradient[e.u] = std::max(out.upper_gradient[e.u], slope);
    out.upper_gradient[e.v] = std::max(out.upper_gradient[e.v], slope);
  }
  out.upper_gradient_holds = true;
  for (const Edge& e : g.edges()) {
    const double bound = e.length * 0.5 * (out.upper_gradient[e.u] + out.upper_gradient[e.v]);
    if (std::abs(out.u[e.u] - out.u[e.v]) > bound * (1.0 + 1e-12)) out.upper_gradient_holds = false;
  }
  for (Index v = 0; v < g.size(); ++v) out.energy += std::pow(out.upper_gradient[v], p) * g.mass(v);
  // value at the farthest node of each end
  Index far0 = O, far1 = O;
  for (Index v = 0; v < g.size(); ++v) {
    if (comp[v] == 0 && g.radius(v) > g.radius(far0)) far0 = v;
    if (comp[v] == 1 && g.radius(v) > g.radius(far1)) far1 = v;
  }
  out.tail_values = {out.u[far0], out.u[far1]};
  return out;
}

std::vector<Example43Row> example43_sweep(int n, std::span<const double> alphas, std::span<const double> ps,
                                          std::span<const int> levels, double band_limit) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "the comparison needs n >= 2");
  std::vector<Example43Row> rows;
  for (double alpha : alphas) {
    for (double p : ps) {
      Example43Row row;
      row.alpha = alpha;
      row.p = p;
      if (alpha <= -n) {
        row.skipped = true;
        row.reason = "|x|^alpha is not locally integrable";
        rows.push_back(std::move(row));
        continue;
      }
      if (!in_muckenhoupt_range(n, alpha, p)) {
        row.skipped = true;
        row.reason = "alpha outside the Muckenhoupt range for this p";
        rows.push_back(std::move(row));
        continue;
      }
      const PowerWeightedEuclidean w{n, alpha};
      std::vector<Ball> sample;
      for (const auto& [x, r] : std::vector<std::pair<double, double>>{{0, 1}, {0, 8}, {1, 0.5}, {2, 1.5}, {3, 1}}) {
        Ball b;
        b.center = Eigen::VectorXd::Zero(n);
        b.center[0] = x;
        b.radius = r;
        sample.push_back(b);
      }
      const double coarse = muckenhoupt_constant(w, p, sample, 64).value;
      const double fine = muckenhoupt_constant(w, p, sample, 128).value;
      if (!std::isfinite(fine) || !std::isfinite(coarse) || std::abs(fine - coarse) > 0.25 * fine) {
        row.skipped = true;
        row.reason = "sampled Muckenhoupt characteristic not stable under refinement";
        rows.push_back(std::move(row));
        continue;
      }
      row.muckenhoupt = fine;
      ModelSpace space{w, std::nullopt, 0};
      const RadialFunction h = RadialFunction::power(1.0, n - 1.0 + alpha).with_cutoff(1.0);
      row.band = compare_R(space, h, p, levels);
      row.stable = row.band.defined && row.band.spread() <= band_limit;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace mms

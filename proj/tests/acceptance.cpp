// Acceptance suite: twelve end-to-end criteria, one PASS/FAIL line each.
// Tolerances and time budgets are fixed here; nothing is tuned at runtime.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mms/chain.hpp"
#include "mms/counterexample.hpp"
#include "mms/error.hpp"
#include "mms/experiments.hpp"
#include "mms/generators.hpp"
#include "mms/growth.hpp"
#include "mms/modulus.hpp"
#include "mms/polar.hpp"
#include "oracles.hpp"

using namespace mms;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// 1. Finite iff (p < Q, Q > 1) or (p = 1, Q = 1) on exact Ahlfors profiles.
void dichotomy(Outcome& out) {
  int matched = 0;
  for (double Q : {1.0, 1.5, 2.0, 3.0}) {
    for (double p : {1.0, 1.25, 1.5, 2.0, 2.5, 3.0}) {
      const RadialProfile prof = annulus_masses(ModelSpace{AhlforsModel{Q, 1.0}, std::nullopt, 0}, 40);
      const bool expected = (Q > 1.0 && p < Q) || (p == 1.0 && Q == 1.0);
      const bool got = script_R(prof, p).finite();
      if (got == expected) ++matched;
      else out.require(false, "Q=" + std::to_string(Q) + " p=" + std::to_string(p));
    }
  }
  out.detail << matched << "/24 cells";
}

// 2. Half-line: Finite with value 1 at p = 1, Divergent at p = 1.5, 2.
void half_line(Outcome& out) {
  const RadialProfile model = annulus_masses(ModelSpace{WeightedHalfLine{}, std::nullopt, 0}, 40);
  const SpaceGraph g = gen::halfline(1024.0);
  const RadialProfile graph = graph_profile(g, 0);
  for (const RadialProfile* prof : {&model, &graph}) {
    const GrowthReport r1 = script_R(*prof, 1.0);
    out.require(r1.finite() && r1.value && std::abs(*r1.value - 1.0) < 1e-12, "p=1 Finite(1)");
    for (double p : {1.5, 2.0}) out.require(script_R(*prof, p).divergent(), "p=" + std::to_string(p) + " divergent");
  }
  out.detail << "model and graph profiles";
}

// One path through k interior nodes, unit masses and lengths, endpoints off
// the support; with `copies` = 2 a second node-disjoint copy is bridged on.
struct PathCase {
  SpaceGraph g;
  ExplicitPaths family;
  std::vector<char> support;
};

PathCase path_case(int k, int copies) {
  const int per = k + 2;
  std::vector<Edge> edges;
  std::vector<char> support(static_cast<std::size_t>(per * copies), 1);
  ExplicitPaths fam;
  for (int c = 0; c < copies; ++c) {
    Path p;
    for (int i = 0; i < per; ++i) p.push_back(c * per + i);
    for (int i = 0; i + 1 < per; ++i) edges.push_back({c * per + i, c * per + i + 1, 1.0});
    support[c * per] = 0;
    support[c * per + per - 1] = 0;
    fam.paths.push_back(p);
    if (c > 0) edges.push_back({c * per - 1, c * per, 1.0});
  }
  return {SpaceGraph(NodeField::Ones(per * copies), edges, 0), fam, support};
}

// 3. value = k^{1-p}; two disjoint copies double it.
void single_path(Outcome& out) {
  double worst = 0.0;
  for (int k : {3, 10, 50}) {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const double expect = std::pow(static_cast<double>(k), 1.0 - p);
      for (int copies : {1, 2}) {
        PathCase c = path_case(k, copies);
        ModulusOptions opts;
        opts.support = c.support;
        const ModulusResult m = modulus(c.g, c.family, p, opts);
        const double err = rel(m.value, copies * expect);
        worst = std::max(worst, err);
        out.require(err <= 1e-6, "k=" + std::to_string(k) + " p=" + std::to_string(p) + " copies=" + std::to_string(copies));
      }
    }
  }
  out.detail << "max rel err " << worst;
}

// 4. Condenser modulus by constraint generation vs. a log-barrier solve
// over every simple E-F path.
void brute_force(Outcome& out) {
  std::mt19937_64 rng(20241014);
  double worst = 0.0;
  std::size_t most_paths = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = oracle::uniform_int(rng, 6, 12);
    const SpaceGraph g = oracle::random_connected_graph(rng, n, n);
    // E = base point, F = the two farthest nodes
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return g.radius(a) > g.radius(b); });
    const Condenser cond{{0}, {order[0], order[1]}};
    const auto paths = oracle::simple_paths(g, cond.E, cond.F);
    most_paths = std::max(most_paths, paths.size());
    for (double p : {1.0, 2.0}) {
      ModulusOptions opts;
      opts.method = ModulusOptions::Method::ConstraintGeneration;
      const ModulusResult m = modulus(g, cond, p, opts);
      const oracle::BarrierResult ref = oracle::barrier_modulus(g, paths, p);
      const double err = rel(m.value, ref.value);
      worst = std::max(worst, err);
      out.require(err <= 1e-6, "trial " + std::to_string(trial) + " p=" + std::to_string(p));
    }
  }
  out.detail << "max rel err " << worst << ", up to " << most_paths << " simple paths";
}

// 5. 8-neighbour grid condenser against the 1-D radial capacity.
void grid_condenser(Outcome& out) {
  const SpaceGraph g = gen::grid(2, 64, true);
  const double inner = 1.5;
  const double ref = oracle::radial_capacity([](double r) { return 2.0 * kPi * r; }, 2.0, inner, 60.0);
  out.require(rel(ref, 2.0 * kPi / std::log(60.0 / inner)) < 1e-9, "oracle quadrature");
  std::vector<double> values;
  for (double R : {4.0, 8.0, 16.0, 32.0, 60.0}) {
    const ModulusResult m = modulus(g, truncated_condenser(g, R, inner), 2.0);
    out.require(m.status == ModulusResult::Status::Converged, "R=" + std::to_string(R) + " converged");
    values.push_back(m.value);
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    out.require(values[i] <= values[i - 1] * (1.0 + 1e-6), "monotone at step " + std::to_string(i));
  }
  const double ratio = values.back() / ref;
  out.require(std::abs(ratio - 1.0) <= 0.15, "within 15% of the radial oracle");
  out.detail << "Mod(R=60) " << values.back() << " vs oracle " << ref << " (ratio " << ratio << ")";
}

// 6. Block construction on the half-line at p = 2.
void blocks_pipeline(Outcome& out) {
  const SpaceGraph g = gen::halfline(1024.0);
  const RadialProfile prof = graph_profile(g, 0);
  const BlockSequence b = greedy_blocks(prof, 2.0, 8);
  out.require(b.blocks() == 8 && !b.exhausted, "8 blocks");
  for (std::size_t k = 0; k < b.blocks(); ++k) {
    double S = 0.0;
    for (int i = b.indices[k]; i < b.indices[k + 1]; ++i) S += std::pow(2.0, 2.0 * i) / prof.mass(i);
    out.require(S > std::ldexp(1.0, static_cast<int>(k + 1)), "S_" + std::to_string(k + 1) + " > 2^k");
  }
  const BlockDensity d = build_density(prof, b);
  out.require(d.budget <= 1.0, "budget <= 1");
  const NodeField u = distance_function(g, prof, d);
  const std::vector<Path> rays{ray_to(g, g.size() - 1)};
  const DivergenceReport div = divergence_check(g, u, rays, std::vector<double>{1, 2, 3, 4, 5, 6});
  out.require(div.pass && div.rays[0].crossed_all(), "thresholds 1..6 crossed");
  out.detail << "budget " << d.budget << ", crossings";
  for (const auto& r : div.rays[0].radii) out.detail << " " << (r ? *r : -1.0);
}

// 7. Spherical coordinates in the plane reproduce the area integral.
void spherical_identity(Outcome& out) {
  const double T = 6.0;
  struct Test {
    const char* name;
    std::function<double(double)> f;
    double exact;
  };
  const std::vector<Test> tests{
      {"disc", [](double r) { return r < 1.0 ? 1.0 : 0.0; }, kPi},
      {"gaussian", [](double r) { return std::exp(-r * r); }, kPi * (1.0 - std::exp(-T * T))},
      {"annulus", [](double r) { return r >= 1.0 && r < 2.0 ? 1.0 : 0.0; }, 3.0 * kPi}};
  std::vector<double> err[2];
  for (int level = 0; level < 2; ++level) {
    polar::Sampling s;
    s.directions = 256;
    s.length = T;
    s.step = level == 0 ? 0.01 : 0.005;
    const PolarSystem sys = polar::euclidean_spherical(2, s);
    for (const Test& t : tests) {
      const double lhs = polar_lhs(sys, [&](PointRef x) { return t.f(x.norm()); });
      err[level].push_back(std::abs(lhs / t.exact - 1.0));
    }
  }
  for (std::size_t i = 0; i < tests.size(); ++i) {
    out.require(err[0][i] <= 0.02, std::string(tests[i].name) + " within 2%");
    out.require(err[1][i] < err[0][i] || err[1][i] < 1e-12, std::string(tests[i].name) + " error shrinks");
    out.detail << tests[i].name << " " << err[0][i] << "->" << err[1][i] << " ";
  }
}

// 8. Wedge-strip variants and the Cantor diamond at their declared constants.
void polar_inequalities(Outcome& out) {
  polar::Sampling s;
  s.directions = 128;
  s.length = 8.0;
  s.step = 0.01;
  const std::vector<PolarTestFunction> wedge_tests{
      {"strip-box", [](PointRef x) { return x[0] >= -3.0 && x[0] < -2.0 && std::abs(x[1]) < 0.5 ? 1.0 : 0.0; }},
      {"gaussian", [](PointRef x) { return std::exp(-(x[0] + 4.0) * (x[0] + 4.0) - x[1] * x[1]); }},
      {"sector", [](PointRef x) {
         const double r = x.norm(), th = std::atan2(x[1], x[0]);
         return r >= 1.0 && r < 3.0 && th >= 0.0 && th < kPi / 8.0 ? 1.0 : 0.0;
       }}};
  PolarVerifyOptions opts;
  opts.tol = 1e-3;
  for (int variant : {1, 2, 3}) {
    const PolarSystem sys = polar::wedge_strip(variant, s);
    const PolarReport rep = verify_polar(sys, wedge_tests, [&](const PointFunction& f) {
      return polar::wedge_volume(f, s.length, 1000);
    });
    out.require(rep.pass && rep.max_ratio <= 1.0 + 1e-3, "wedge variant " + std::to_string(variant));
    out.detail << "wedge" << variant << " " << rep.max_ratio << " ";
  }
  const int depth = 4;
  polar::Sampling cs;
  cs.directions = 128;
  cs.length = 2.0;
  cs.step = 0.01;
  const PolarSystem diamond = polar::cantor_diamond(depth, cs);
  const std::vector<PolarTestFunction> cantor_tests{
      {"diamond", [](PointRef x) { return x[0] > 1.0 / 3.0 && x[0] < 2.0 / 3.0 ? 1.0 : 0.0; }},
      {"one", [](PointRef) { return 1.0; }},
      {"decay", [](PointRef x) { return std::exp(-x[0]) * (1.0 + x[1]); }}};
  const PolarReport rep = verify_polar(diamond, cantor_tests, [&](const PointFunction& f) {
    return polar::cantor_volume(f, depth, cs.length, 100);
  });
  out.require(rep.pass && rep.max_ratio <= 1.0 + 1e-3, "cantor diamond");
  out.detail << "cantor " << rep.max_ratio;
}

// 9. compare_R bands for |x|^alpha in the plane are truncation stable.
void example_band(Outcome& out) {
  const std::vector<int> levels{2, 4, 6, 8, 10};
  for (double alpha : {-0.5, 0.0, 0.5}) {
    for (double p : {1.0, 1.5}) {
      const ModelSpace space{PowerWeightedEuclidean{2, alpha}, std::nullopt, 0};
      const RadialFunction h = RadialFunction::power(1.0, 1.0 + alpha).with_cutoff(1.0);
      const RatioBand band = compare_R(space, h, p, levels);
      const bool ok = band.defined && band.spread() <= 4.0;
      out.require(ok, "alpha=" + std::to_string(alpha) + " p=" + std::to_string(p));
      out.detail << "(" << alpha << "," << p << "):" << band.spread() << (band.asserted ? "" : "*") << " ";
    }
  }
  out.detail << "(* outside the Muckenhoupt range)";
}

// 10. Annular chains on the grid; the two-ended line fails.
void chains(Outcome& out) {
  const SpaceGraph grid = gen::grid(2, 64);
  const std::vector<double> radii{8, 16, 32};
  for (double lambda : {1.0, 2.0, 4.0}) {
    const ChainReport rep = chain_check(grid, lambda, radii, 8);
    const bool pass = rep.outcome == ChainReport::Outcome::Pass && rep.constants.has_value();
    out.require(pass, "grid lambda=" + std::to_string(lambda));
    if (!pass) continue;
    bool verified = !rep.chains.empty();
    for (const BallChain& c : rep.chains) verified = verified && verify_chain(grid, lambda, *rep.constants, c);
    out.require(verified, "chains re-verified");
    out.detail << "lambda " << lambda << ": c1=" << rep.constants->c1 << " c2=" << rep.constants->c2
               << " M=" << rep.constants->M << "; ";
    // the same ball radii pass at lambda' = 1 with c1' = c1 lambda
    ChainConstants k = *rep.constants;
    k.c1 *= lambda;
    const ChainReport again = chain_check_fixed(grid, 1.0, radii, 8, k);
    out.require(again.outcome == ChainReport::Outcome::Pass, "lambda monotonicity at lambda=" + std::to_string(lambda));
  }
  const SpaceGraph line = gen::two_ended_line(64);
  const ChainReport rep = chain_check(line, 1.0, radii, 8);
  const bool failed = rep.outcome == ChainReport::Outcome::Fail && rep.witness.has_value();
  out.require(failed, "two-ended line fails");
  if (failed) {
    const auto& [r, xy] = *rep.witness;
    const double xs = line.positions()(0, xy.first), ys = line.positions()(0, xy.second);
    out.require(xs * ys < 0.0, "witness on opposite ends");
    out.detail << "line witness r=" << r << " x=" << xs << " y=" << ys;
  }
}

// 11. Two ends carry a finite-energy function with distinct tail values.
void two_ends(Outcome& out) {
  const SpaceGraph g = gen::two_ended_line(32);
  for (double p : {1.0, 2.0}) {
    const TwoEndsDemo d = two_ends_demo(g, p);
    const bool tails = (d.tail_values.first == 0.0 && d.tail_values.second == 1.0) ||
                       (d.tail_values.first == 1.0 && d.tail_values.second == 0.0);
    out.require(tails, "tail values {0,1}");
    out.require(std::isfinite(d.energy) && d.upper_gradient_holds, "finite energy with an upper gradient");
    out.detail << "p=" << p << " energy " << d.energy << " ";
  }
}

// 12. value * truncated growth stays bounded below where the series is finite.
void product_bound(Outcome& out) {
  struct Case {
    const char* name;
    SpaceGraph g;
    double p;
    std::vector<double> radii;
  };
  std::vector<Case> cases;
  cases.push_back({"half-line", gen::halfline(1024.0), 1.0, {4, 16, 64, 256, 1000}});
  cases.push_back({"grid", gen::grid(2, 64, true), 1.5, {4, 8, 16, 32, 60}});
  for (const Case& c : cases) {
    out.require(script_R(graph_profile(c.g, 0), c.p).finite(), std::string(c.name) + " series finite");
    const auto steps = condenser_sequence(c.g, c.p, c.radii);
    std::vector<double> products;
    for (const auto& s : steps) products.push_back(s.product);
    const TrendFit fit = classify_trend(c.radii, products);
    const double lo = *std::min_element(products.begin(), products.end());
    out.require(lo > 0.0 && fit.trend != Trend::Decaying, std::string(c.name) + " no decay");
    out.detail << c.name << " products";
    for (double x : products) out.detail << " " << x;
    out.detail << " (" << to_string(fit.trend) << ", slope " << fit.slope << "); ";
  }
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "dichotomy table", 1, dichotomy},
      {2, "half-line criteria", 1, half_line},
      {3, "single-path modulus", 5, single_path},
      {4, "brute-force equivalence", 60, brute_force},
      {5, "grid condenser vs radial oracle", 120, grid_condenser},
      {6, "block construction pipeline", 5, blocks_pipeline},
      {7, "spherical identity", 5, spherical_identity},
      {8, "wedge-strip and Cantor diamond", 10, polar_inequalities},
      {9, "power-weight band", 30, example_band},
      {10, "annular chain condition", 30, chains},
      {11, "two-ends non-uniqueness", 1, two_ends},
      {12, "product bound", 60, product_bound},
  };
  int failures = 0;
  double total = 0.0;
  for (const Criterion& c : all) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    total += secs;
    out.require(secs <= c.budget_seconds, "time budget " + std::to_string(c.budget_seconds) + " s");
    if (!out.pass) ++failures;
    std::printf("%s  #%-2d %s (%.2f s): %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, secs, out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(all.size()) - failures, all.size(), total);
  return failures == 0 ? 0 : 1;
}

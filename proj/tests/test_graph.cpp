#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "mms/error.hpp"
#include "mms/generators.hpp"
#include "mms/graph.hpp"
#include "mms/poincare.hpp"
#include "oracles.hpp"

using namespace mms;

namespace {
SpaceGraph line3() { return SpaceGraph(NodeField::Ones(3), {{0, 1, 1.0}, {1, 2, 1.0}}, 0); }

// Floyd-Warshall distances as an independent metric oracle
Eigen::MatrixXd all_pairs(const SpaceGraph& g) {
  const Index n = g.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, INFINITY);
  for (Index v = 0; v < n; ++v) d(v, v) = 0.0;
  for (const Edge& e : g.edges()) {
    d(e.u, e.v) = std::min(d(e.u, e.v), e.length);
    d(e.v, e.u) = d(e.u, e.v);
  }
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
  return d;
}
}  // namespace

TEST_CASE("balls use the strict inequality") {
  const SpaceGraph g = line3();
  CHECK(ball(g, 0, 1.5) == NodeSet{0, 1});
  CHECK(ball(g, 0, 1.0) == NodeSet{0});
  CHECK(ball(g, 1, 0.0).empty());
  const SpaceGraph grid = gen::grid(2, 2);
  const Index centre = grid.base();
  const NodeSet b = ball(grid, centre, 1.1);
  CHECK(b.size() == 5);
  CHECK(std::find(b.begin(), b.end(), centre) != b.end());
}

TEST_CASE("line integrals use the trapezoid rule") {
  const SpaceGraph two(NodeField::Ones(2), {{0, 1, 2.0}}, 0);
  NodeField f(2);
  f << 1.0, 3.0;
  const Path p{0, 1};
  CHECK(line_integral(two, p, f) == doctest::Approx(4.0));
  CHECK(line_integral(two, p, NodeField::Zero(2)) == 0.0);
  const SpaceGraph g = gen::halfline(10.0, 0.5);
  Path walk;
  for (Index v = 0; v < g.size(); ++v) walk.push_back(v);
  CHECK(line_integral(g, walk, NodeField::Ones(g.size())) == doctest::Approx(10.0));
  CHECK(path_length(g, walk) == doctest::Approx(10.0));
}

TEST_CASE("a non-edge step is reported") {
  const SpaceGraph g = line3();
  try {
    line_integral(g, Path{0, 2}, NodeField::Ones(3));
    FAIL("expected MalformedPath");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedPath);
  }
}

TEST_CASE("invalid graphs are refused") {
  CHECK_THROWS_AS(SpaceGraph(NodeField::Ones(3), {{0, 1, 1.0}}, 0), Error);                   // disconnected
  CHECK_THROWS_AS(SpaceGraph(NodeField::Ones(2), {{0, 1, -1.0}}, 0), Error);                  // bad length
  CHECK_THROWS_AS(SpaceGraph(NodeField::Constant(2, 0.0), {{0, 1, 1.0}}, 0), Error);          // zero mass
}

TEST_CASE("random graphs: Dijkstra is a metric and matches Floyd-Warshall") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = oracle::uniform_int(rng, 2, 30);
    const SpaceGraph g = oracle::random_connected_graph(rng, n, oracle::uniform_int(rng, 0, n));
    const Eigen::MatrixXd D = all_pairs(g);
    for (Index s = 0; s < g.size(); ++s) {
      const NodeField d = distances_from(g, s);
      for (Index t = 0; t < g.size(); ++t) CHECK(d[t] == doctest::Approx(D(s, t)).epsilon(1e-12));
    }
    for (Index v = 0; v < g.size(); ++v) CHECK(g.radius(v) == doctest::Approx(D(0, v)));
    for (int k = 0; k < 20; ++k) {
      const Index a = oracle::uniform_int(rng, 0, n - 1), b = oracle::uniform_int(rng, 0, n - 1),
                  c = oracle::uniform_int(rng, 0, n - 1);
      CHECK(D(a, b) == doctest::Approx(D(b, a)));
      CHECK(D(a, c) <= D(a, b) + D(b, c) + 1e-12);
    }
  }
}

TEST_CASE("random graphs: balls grow with the radius, line integrals concatenate") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = oracle::uniform_int(rng, 3, 25);
    const SpaceGraph g = oracle::random_connected_graph(rng, n, n / 2);
    const Index c = oracle::uniform_int(rng, 0, n - 1);
    const double r1 = oracle::uniform(rng, 0.0, 4.0), r2 = r1 + oracle::uniform(rng, 0.0, 4.0);
    const NodeSet b1 = ball(g, c, r1), b2 = ball(g, c, r2);
    CHECK(std::includes(b2.begin(), b2.end(), b1.begin(), b1.end()));

    const Index x = oracle::uniform_int(rng, 0, n - 1), y = oracle::uniform_int(rng, 0, n - 1);
    const Index z = oracle::uniform_int(rng, 0, n - 1);
    const std::vector<Index> from_x{x}, from_y{y};
    const auto unit = [](Index, Index, double len) { return len; };
    Path first = shortest_paths(g, from_x, unit).path_to(y);
    const Path second = shortest_paths(g, from_y, unit).path_to(z);
    NodeField f(n);
    for (int v = 0; v < n; ++v) f[v] = oracle::uniform(rng, 0.0, 3.0);
    const double separate = line_integral(g, first, f) + line_integral(g, second, f);
    first.insert(first.end(), second.begin() + 1, second.end());
    CHECK(line_integral(g, first, f) == doctest::Approx(separate).epsilon(1e-12));
  }
}

TEST_CASE("generators") {
  SUBCASE("grid") {
    const SpaceGraph g = gen::grid(2, 3);
    CHECK(g.size() == 49);
    CHECK(g.edges().size() == 2 * 7 * 6);
    CHECK(g.max_radius() == doctest::Approx(6.0));  // l1 corner
    const SpaceGraph g8 = gen::grid(2, 3, true);
    CHECK(g8.edges().size() == 2 * 7 * 6 + 2 * 6 * 6);
    CHECK(g8.max_radius() == doctest::Approx(3.0 * std::sqrt(2.0)));
    CHECK(gen::grid(3, 2).size() == 125);
  }
  SUBCASE("half-line Voronoi masses and profile") {
    const SpaceGraph g = gen::halfline(64.0);
    CHECK(g.mass(0) == doctest::Approx(0.5));
    CHECK(g.mass(1) == doctest::Approx(1.0));
    CHECK(g.mass(g.size() - 1) == doctest::Approx(0.5));
    const RadialProfile p = graph_profile(g, 0);
    CHECK(p.j_max() == 5);
    for (int j = 0; j <= 5; ++j) CHECK(p.mass(j) == doctest::Approx(std::ldexp(1.0, j)));
  }
  SUBCASE("tree") {
    const SpaceGraph t = gen::tree(3, 4);
    CHECK(t.size() == 1 + 3 + 9 + 27 + 81);
    CHECK(t.max_radius() == doctest::Approx(4.0));
    const SpaceGraph split = gen::tree(2, 5, 1.0, 1.0, gen::TreeMass::Split);
    CHECK(measure(split, annulus(split, 2.0, 4.0)) < measure(t, annulus(t, 2.0, 4.0)));
  }
  SUBCASE("two-ended line") {
    const SpaceGraph l = gen::two_ended_line(5);
    CHECK(l.size() == 11);
    CHECK(l.positions()(0, l.base()) == 0.0);
    CHECK(annulus(l, 2.0, 4.0).size() == 4);
  }
}

TEST_CASE("Poincare probe") {
  const SpaceGraph g = gen::halfline(64.0);
  std::vector<BallSample> sample;
  for (double x : {4.0, 10.0, 20.0, 40.0})
    for (double r : {1.5, 3.0, 8.0}) sample.push_back({static_cast<Index>(x), r});

  SUBCASE("constant u gives 0") {
    CHECK(poincare_probe(g, NodeField::Constant(g.size(), 3.0), NodeField::Ones(g.size()), 2.0, 1.0, sample).value == 0.0);
  }
  SUBCASE("distance on interval balls stays below 1/2") {
    const NodeField u = g.base_distances();
    const PoincareProbe pr = poincare_probe(g, u, NodeField::Ones(g.size()), 1.0, 1.0, sample);
    CHECK(pr.value <= 0.5 + 1e-12);
    CHECK(pr.value > 0.0);
    CHECK(pr.evaluated == sample.size());
  }
  SUBCASE("affine change of u with rescaled rho leaves the value unchanged") {
    std::mt19937_64 rng(9);
    NodeField u(g.size()), rho(g.size());
    for (Index v = 0; v < g.size(); ++v) {
      u[v] = oracle::uniform(rng, -1, 1);
      rho[v] = oracle::uniform(rng, 0.1, 2);
    }
    const double base = poincare_probe(g, u, rho, 2.0, 2.0, sample).value;
    const double a = -3.5, b = 11.0;
    const NodeField u2 = (a * u.array() + b).matrix();
    const NodeField rho2 = std::abs(a) * rho;
    CHECK(poincare_probe(g, u2, rho2, 2.0, 2.0, sample).value == doctest::Approx(base).epsilon(1e-12));
  }
  SUBCASE("rho = 0 everywhere skips every ball") {
    const SpaceGraph two(NodeField::Ones(2), {{0, 1, 1.0}}, 0);
    NodeField u(2);
    u << 1.0, 0.0;
    const std::vector<BallSample> s{{0, 2.0}};
    try {
      poincare_probe(two, u, NodeField::Zero(2), 2.0, 1.0, s);
      FAIL("expected AllSkipped");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::AllSkipped);
    }
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mms/chain.hpp"
#include "mms/generators.hpp"

using namespace mms;
using Outcome = ChainReport::Outcome;

TEST_CASE("sampled pairs lie in the annulus") {
  const SpaceGraph g = gen::grid(2, 16);
  for (double r : {4.0, 8.0, 16.0}) {
    const auto pairs = sample_pairs(g, r, 8);
    CHECK(!pairs.empty());
    CHECK(pairs.size() <= 8);
    for (const auto& [x, y] : pairs) {
      for (Index v : {x, y}) {
        CHECK(g.radius(v) >= r / 2.0);
        CHECK(g.radius(v) < r);
      }
    }
  }
}

TEST_CASE("planar grid admits annular chains") {
  const SpaceGraph g = gen::grid(2, 32);
  const std::vector<double> radii{4.0, 8.0, 16.0};
  const ChainReport rep = chain_check(g, 1.0, radii, 6);
  REQUIRE(rep.outcome == Outcome::Pass);
  REQUIRE(rep.constants);
  CHECK(!rep.chains.empty());
  for (const BallChain& c : rep.chains) {
    CHECK(c.centers.front() == c.x);
    CHECK(c.centers.back() == c.y);
    CHECK(c.overlaps.size() + 1 == c.centers.size());
    CHECK(static_cast<int>(c.centers.size()) <= rep.constants->M);
    CHECK(verify_chain(g, 1.0, *rep.constants, c));
  }

  SUBCASE("a witness moved onto O is rejected") {
    BallChain broken = rep.chains.front();
    broken.centers[broken.centers.size() / 2] = g.base();
    CHECK(!verify_chain(g, 1.0, *rep.constants, broken));
  }
  SUBCASE("the found constants re-check without search") {
    CHECK(chain_check_fixed(g, 1.0, radii, 6, *rep.constants).outcome == Outcome::Pass);
  }
  SUBCASE("a larger lambda also passes") {
    const ChainReport wide = chain_check(g, 2.0, radii, 6);
    CHECK(wide.outcome == Outcome::Pass);
    for (const BallChain& c : wide.chains) CHECK(verify_chain(g, 2.0, *wide.constants, c));
  }
}

TEST_CASE("two-ended line has no chain between its ends") {
  const SpaceGraph line = gen::two_ended_line(64);
  const std::vector<double> radii{8.0, 16.0};
  const ChainReport rep = chain_check(line, 1.0, radii, 4);
  CHECK(rep.outcome == Outcome::Fail);
  REQUIRE(rep.witness);
  const auto [x, y] = rep.witness->second;
  // the two points sit on opposite sides of O
  CHECK(line.positions()(0, x) * line.positions()(0, y) < 0.0);
}

TEST_CASE("one-ended half-line passes") {
  const SpaceGraph hl = gen::halfline(128.0);
  const std::vector<double> radii{8.0, 16.0, 32.0};
  CHECK(chain_check(hl, 1.0, radii, 4).outcome == Outcome::Pass);
}

TEST_CASE("radii with empty annuli are recorded") {
  const SpaceGraph hl = gen::halfline(8.0);
  const std::vector<double> radii{4.0, 64.0};
  const ChainReport rep = chain_check(hl, 1.0, radii, 4);
  CHECK(rep.empty_radii.size() == 1);
  CHECK(rep.empty_radii[0] == 64.0);
}

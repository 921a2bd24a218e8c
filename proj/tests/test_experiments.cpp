#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mms/experiments.hpp"
#include "mms/generators.hpp"

using namespace mms;

TEST_CASE("trend classification") {
  const std::vector<double> radii{4, 8, 16, 32, 64};
  SUBCASE("flat tail is bounded") {
    const std::vector<double> v{3.0, 2.0, 1.05, 1.02, 1.0};
    const TrendFit fit = classify_trend(radii, v);
    CHECK(fit.trend == Trend::Bounded);
    CHECK(fit.tail_spread == doctest::Approx(1.05));
  }
  SUBCASE("1/R decays with slope -1") {
    std::vector<double> v;
    for (double r : radii) v.push_back(1.0 / r);
    const TrendFit fit = classify_trend(radii, v);
    CHECK(fit.trend == Trend::Decaying);
    CHECK(fit.slope == doctest::Approx(-1.0));
  }
  SUBCASE("values at the floor are not bounded") {
    const std::vector<double> v{1e-7, 1e-7, 1e-7, 1e-7, 1e-7};
    CHECK(classify_trend(radii, v).trend != Trend::Bounded);
  }
  SUBCASE("slow decay with a wide tail is inconclusive") {
    // slope about -0.05 over the tail but spread above 1.2
    const std::vector<double> v{1.0, 1.0, 1.0, 0.95, 0.7};
    const TrendFit fit = classify_trend(radii, v);
    CHECK(fit.trend == Trend::Decaying);
    const std::vector<double> w{1.0, 1.0, 1.3, 1.0, 1.3};
    CHECK(classify_trend(radii, w).trend == Trend::Inconclusive);
  }
}

TEST_CASE("two ends carry a nonconstant finite-energy function") {
  const SpaceGraph line = gen::two_ended_line(32);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const TwoEndsDemo d = two_ends_demo(line, p);
    CHECK(d.ends == 2);
    CHECK(d.tail_values.first == 0.0);
    CHECK(d.tail_values.second == 1.0);
    CHECK(d.upper_gradient_holds);
    // slope 1/2 on the three unit-mass nodes -1, 0, 1 only
    CHECK(d.energy == doctest::Approx(3.0 * std::pow(0.5, p)));
  }
}

TEST_CASE("half-line probes agree with the series") {
  const SpaceGraph g = gen::halfline(256.0);
  Thm12Case c;
  c.name = "halfline";
  c.graph = &g;
  c.radii = {4, 16, 64, 200};
  for (int j = 0; j <= 400; ++j) c.profile.masses.push_back(std::ldexp(1.0, j));
  c.profile.asymptotic = AsymptoticClass::polynomial(1.0);

  SUBCASE("p = 1") {
    c.p = 1.0;
    const Thm12Row row = thm12_probe(c);
    CHECK(row.series.finite());
    CHECK(row.trend.trend == Trend::Bounded);
    CHECK(!row.blocks_constructible);
    CHECK(row.consistent);
  }
  SUBCASE("p = 2") {
    c.p = 2.0;
    const Thm12Row row = thm12_probe(c);
    CHECK(row.series.divergent());
    CHECK(row.trend.trend == Trend::Decaying);
    CHECK(row.blocks_constructible);
    CHECK(row.consistent);
    for (std::size_t i = 1; i < row.condensers.size(); ++i)
      CHECK(row.condensers[i].result.value <= row.condensers[i - 1].result.value + 1e-9);
  }
  SUBCASE("blocks never accompany a finite series") {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      c.p = p;
      const Thm12Row row = thm12_probe(c);
      CHECK(!(row.blocks_constructible && row.series.finite()));
    }
  }
}

TEST_CASE("comparison sweep") {
  const std::vector<double> alphas{-3.0, 0.0, 0.5};
  const std::vector<double> ps{1.0, 2.0};
  const std::vector<int> levels{2, 4, 6, 8};
  const auto rows = example43_sweep(2, alphas, ps, levels);
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) {
    CAPTURE(row.alpha);
    CAPTURE(row.p);
    if (row.alpha == -3.0) {
      CHECK(row.skipped);
    } else if (row.alpha == 0.5 && row.p == 1.0) {
      CHECK(row.skipped);  // outside the p = 1 range
    } else {
      CHECK(!row.skipped);
      CHECK(row.stable);
      CHECK(row.band.defined);
    }
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mms/error.hpp"
#include "mms/growth.hpp"
#include "oracles.hpp"

using namespace mms;
using Kind = GrowthReport::Kind;

namespace {
RadialProfile profile(std::vector<double> masses, AsymptoticClass cls = AsymptoticClass::unknown(), int j_min = 0) {
  RadialProfile p;
  p.j_min = j_min;
  p.masses = std::move(masses);
  p.asymptotic = cls;
  return p;
}

RadialProfile dyadic(double Q, int J) {
  std::vector<double> m;
  for (int j = 0; j <= J; ++j) m.push_back(std::pow(2.0, Q * j));
  return profile(m, AsymptoticClass::polynomial(Q));
}

void check_monotone(const GrowthReport& r) {
  for (std::size_t i = 1; i < r.partial.size(); ++i) CHECK(r.partial[i] >= r.partial[i - 1]);
  if (r.finite()) CHECK(*r.value >= r.last_partial() * (1.0 - 1e-14));
}
}  // namespace

TEST_CASE("unit half-line") {
  const RadialProfile hl = dyadic(1.0, 20);
  SUBCASE("p = 1 is finite with value 1") {
    const GrowthReport r = script_R(hl, 1.0);
    REQUIRE(r.finite());
    CHECK(*r.value == doctest::Approx(1.0));
    CHECK(r.basis != GrowthReport::Basis::PrefixOnly);
    check_monotone(r);
  }
  SUBCASE("p = 2 diverges with terms 2^j") {
    const GrowthReport r = script_R(hl, 2.0);
    CHECK(r.divergent());
    for (std::size_t j = 0; j < r.terms.size(); ++j) CHECK(r.terms[j] == doctest::Approx(std::ldexp(1.0, int(j))));
    check_monotone(r);
  }
}

TEST_CASE("Ahlfors Q = 2 at p = 3 diverges with terms 2^{j/2}") {
  const GrowthReport r = script_R(dyadic(2.0, 16), 3.0);
  CHECK(r.divergent());
  for (std::size_t j = 0; j < r.terms.size(); ++j) CHECK(r.terms[j] == doctest::Approx(std::pow(2.0, 0.5 * j)));
}

TEST_CASE("Ahlfors dichotomy on exact profiles") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const double Q = trial % 6 == 0 ? 1.0 : oracle::uniform(rng, 1.0, 5.0);
    const double p = trial % 5 == 0 ? 1.0 : oracle::uniform(rng, 1.0, 6.0);
    const GrowthReport r = script_R(dyadic(Q, 24), p);
    const bool expect_finite = Q > 1.0 ? p < Q : p == 1.0;
    CAPTURE(Q);
    CAPTURE(p);
    CHECK(r.finite() == expect_finite);
    CHECK(r.kind != Kind::Undecided);
    check_monotone(r);
    if (expect_finite && p > 1.0) {
      // geometric series sum_j 2^{j(p-Q)/(p-1)}
      const double ratio = std::pow(2.0, (p - Q) / (p - 1.0));
      CHECK(*r.value == doctest::Approx(1.0 / (1.0 - ratio)).epsilon(1e-9));
    }
  }
}

TEST_CASE("undeclared profiles are prefix-only") {
  const GrowthReport r = script_R(profile({1.0, 4.0, 16.0}), 1.5);
  CHECK(r.kind == Kind::Undecided);
  CHECK(r.basis == GrowthReport::Basis::PrefixOnly);
  CHECK(!r.value);
  CHECK(r.partial.size() == 3);
}

TEST_CASE("p below 1 is rejected") {
  CHECK_THROWS_AS(script_R(dyadic(2.0, 4), 0.5), Error);
}

TEST_CASE("doubling and scaling the masses") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> m;
    for (int j = 0; j < 12; ++j) m.push_back(oracle::uniform(rng, 0.1, 10.0) * std::ldexp(1.0, j));
    const double p = oracle::uniform(rng, 1.05, 4.0);
    const double c = oracle::uniform(rng, 0.2, 9.0);
    std::vector<double> doubled = m, scaled = m;
    for (auto& x : doubled) x *= 2.0;
    for (auto& x : scaled) x *= c;
    const GrowthReport a = script_R(profile(m), p), b = script_R(profile(doubled), p), s = script_R(profile(scaled), p);
    check_monotone(a);
    for (std::size_t j = 0; j < a.terms.size(); ++j)
      CHECK(b.terms[j] == doctest::Approx(a.terms[j] * std::pow(2.0, 1.0 / (1.0 - p))).epsilon(1e-12));
    CHECK(s.last_partial() == doctest::Approx(a.last_partial() * std::pow(c, 1.0 / (1.0 - p))).epsilon(1e-12));
    const GrowthReport a1 = script_R(profile(m), 1.0), s1 = script_R(profile(scaled), 1.0);
    CHECK(s1.last_partial() == doctest::Approx(a1.last_partial() / c).epsilon(1e-12));
    check_monotone(a1);
  }
}

TEST_CASE("weighted integral in the Lebesgue plane") {
  const ModelSpace plane{PowerWeightedEuclidean{2, 0.0}, std::nullopt, 0};
  SUBCASE("h = |x| at p = 3/2 gives 2 pi") {
    const GrowthReport r = R_weight(plane, RadialFunction::power(1.0, 1.0), 1.5, 1024.0);
    REQUIRE(r.finite());
    CHECK(*r.value == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-6));
    // truncated integral 2 pi (1 - 1/R)
    CHECK(r.last_partial() == doctest::Approx(2.0 * std::numbers::pi * (1.0 - 1.0 / 1024.0)).epsilon(1e-6));
    check_monotone(r);
  }
  SUBCASE("h = 0 diverges") {
    CHECK(R_weight(plane, RadialFunction::constant(0.0), 2.0, 64.0).divergent());
  }
  SUBCASE("p = 1 is the grid sup of 1/h") {
    const GrowthReport r = R_weight(plane, RadialFunction::power(1.0, 1.0), 1.0, 64.0);
    CHECK(r.last_partial() == doctest::Approx(1.0));
    CHECK(r.grid_resolution > 0);
  }
  SUBCASE("truncation below 1 is rejected") {
    CHECK_THROWS_AS(R_weight(plane, RadialFunction::power(1.0, 1.0), 1.5, 0.5), Error);
  }
}

TEST_CASE("weighted integral matches radial quadrature") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 12; ++trial) {
    const double Q = oracle::uniform(rng, 1.5, 3.5), e = oracle::uniform(rng, 0.0, 3.0), p = oracle::uniform(rng, 1.2, 3.0);
    const ModelSpace s{AhlforsModel{Q, 1.0}, std::nullopt, 0};
    const double R = 256.0;
    const GrowthReport r = R_weight(s, RadialFunction::power(1.0, e), p, R);
    // the shell density of mu(B(r)) = r^Q is Q r^{Q-1}; oracle integrates in log r
    const double a = std::log(1.0), b = std::log(R);
    auto f = [&](double u) {
      const double x = std::exp(u);
      return std::pow(x, e * p / (1.0 - p)) * Q * std::pow(x, Q - 1.0) * x;
    };
    const int panels = 4096;
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    CHECK(r.last_partial() == doctest::Approx(sum * h / 3.0).epsilon(1e-6));
  }
}

TEST_CASE("comparison band") {
  const ModelSpace plane{PowerWeightedEuclidean{2, 0.0}, std::nullopt, 0};
  const std::vector<int> levels{2, 4, 6, 8, 10, 12};
  const RatioBand band = compare_R(plane, RadialFunction::power(1.0, 1.0), 1.5, levels);
  REQUIRE(band.defined);
  CHECK(band.asserted);
  CHECK(band.min > 0.0);
  CHECK(band.spread() < 2.0);

  SUBCASE("homogeneity in h") {
    const RatioBand seven = compare_R(plane, RadialFunction::power(7.0, 1.0), 1.5, levels);
    const double factor = std::pow(7.0, 1.5 / (1.0 - 1.5));
    CHECK(seven.max == doctest::Approx(band.max * factor).epsilon(1e-12));
    CHECK(seven.min == doctest::Approx(band.min * factor).epsilon(1e-12));
  }
  SUBCASE("outside the Muckenhoupt range nothing is asserted") {
    const ModelSpace heavy{PowerWeightedEuclidean{2, 3.0}, std::nullopt, 0};
    CHECK(!in_muckenhoupt_range(2, 3.0, 1.5));
    const RatioBand b = compare_R(heavy, RadialFunction::power(1.0, 4.0), 1.5, levels);
    CHECK(!b.asserted);
  }
}

TEST_CASE("Muckenhoupt range") {
  CHECK(in_muckenhoupt_range(2, 0.0, 1.0));
  CHECK(!in_muckenhoupt_range(2, 0.5, 1.0));
  CHECK(in_muckenhoupt_range(2, 1.9, 2.0));
  CHECK(!in_muckenhoupt_range(2, 2.0, 2.0));
  CHECK(!in_muckenhoupt_range(3, -3.0, 2.0));
}

#include "doctest.h"
#include "oracles.hpp"
#include "thetavanish/huffing.hpp"
#include "thetavanish/theta.hpp"

using namespace thetavanish;

TEST_CASE("huff keeps multiples of M") {
  auto g = LaurentSeries::from_terms({-4, 10}, {{-3, 1}, {-2, 5}, {0, 1}, {3, 7}, {4, 2}});
  auto h = huff(g, 3);
  CHECK(h == LaurentSeries::from_terms({-4, 10}, {{-3, 1}, {0, 1}, {3, 7}}));
  CHECK(huff(g, 1) == g);
  CHECK_THROWS(huff(g, 0));
}

TEST_CASE("extract_progression uses mathematical residues") {
  auto g = LaurentSeries::from_terms({-10, 10}, {{-7, 1}, {-5, 2}, {2, 3}, {3, 4}});
  auto p = extract_progression(g, 5, 3);
  CHECK(p == LaurentSeries::from_terms({-10, 10}, {{-7, 1}, {3, 4}}));
  CHECK(extract_progression(g, 5, -2) == p);
}

TEST_CASE("progressions partition the series") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    auto g = oracle::random_series(rng, {-13, 40});
    for (Exp M = 1; M <= 7; ++M) {
      LaurentSeries acc(g.window());
      for (Exp r = 0; r < M; ++r) acc = add(acc, extract_progression(g, M, r));
      CHECK(acc == g);
    }
  }
}

TEST_CASE("vanishes_on witnesses") {
  auto g = family_series(FamilyId::gamma, 1, 1, 5, 1, 3, {0, 100});
  auto r0 = vanishes_on(g, 5, 0);
  CHECK_FALSE(r0.vanishes);
  REQUIRE(r0.witness);
  CHECK(r0.witness->exponent == 0);
  CHECK(r0.witness->coeff == 1);
  CHECK(vanishes_on(g, 5, 2).vanishes);
  CHECK(vanishes_on(g, 5, 2).checked == 20);
  // Richmond-Szekeres series h(q) = (q, q^7; q^8) / (q^3, q^5; q^8)
  auto h = poch_product({{1, 1, 8, 1}, {1, 7, 8, 1}, {1, 3, 8, -1}, {1, 5, 8, -1}}, {0, 100});
  CHECK(vanishes_on(h, 4, 2).vanishes);
  CHECK_FALSE(vanishes_on(h, 4, 3).vanishes);
}

TEST_CASE("progression_count") {
  CHECK(progression_count({0, 10}, 5, 0) == 2);
  CHECK(progression_count({-3, 10}, 5, 2) == 3);  // -3, 2, 7
  CHECK(progression_count({1, 4}, 5, 0) == 0);
}

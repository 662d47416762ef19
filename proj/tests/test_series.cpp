#include "doctest.h"
#include "oracles.hpp"
#include "thetavanish/series.hpp"

using namespace thetavanish;

namespace {

LaurentSeries P(Window w, std::vector<Term> t) { return LaurentSeries::from_terms(w, std::move(t)); }

}  // namespace

TEST_CASE("monomial and coeff_at") {
  auto g = P({0, 10}, {{0, 1}, {1, 2}});
  CHECK(g.coeff_at(1) == 2);
  CHECK(g.coeff_at(5) == 0);
  CHECK_THROWS_AS(g.coeff_at(12), WindowError);
  CHECK_THROWS_AS(g.coeff_at(-1), WindowError);
  auto m = monomial(3, 4, {0, 10});
  CHECK(m.coeff_at(4) == 3);
  CHECK(m.size() == 1);
}

TEST_CASE("zero coefficients are dropped") {
  auto g = P({0, 5}, {{1, 2}, {1, -2}, {2, 0}});
  CHECK(g.is_zero());
  CHECK(g == LaurentSeries(Window{0, 5}));
}

TEST_CASE("add") {
  auto a = P({-2, 2}, {{-1, 1}, {1, 1}});
  auto b = P({-2, 2}, {{-1, -1}});
  auto c = add(a, b);
  CHECK(c == P({-2, 2}, {{1, 1}}));
  // windows: exact up to the smaller hi
  auto d = add(P({0, 10}, {{0, 1}}), P({0, 4}, {{3, 1}}));
  CHECK(d.window().hi == 4);
}

TEST_CASE("mul examples") {
  auto a = P({0, 10}, {{0, 1}, {1, 1}});
  auto b = P({0, 10}, {{0, 1}, {1, -1}});
  auto c = mul(a, b);
  CHECK(c.coeff_at(0) == 1);
  CHECK(c.coeff_at(1) == 0);
  CHECK(c.coeff_at(2) == -1);
  // (1 + q)^3 on [0, 3)
  auto s = pow(P({0, 3}, {{0, 1}, {1, 1}}), 3);
  CHECK(s == P({0, 3}, {{0, 1}, {1, 3}, {2, 3}}));
  auto u = mul(monomial(1, -1, {-1, 5}), monomial(1, 1, {1, 5}));
  CHECK(u.coeff_at(0) == 1);
}

TEST_CASE("pow zero is one with inherited precision") {
  auto a = P({0, 7}, {{0, 1}, {2, 5}});
  auto one_ = pow(a, 0);
  CHECK(one_.coeff_at(0) == 1);
  CHECK(one_.window() == Window{0, 7});
  CHECK(mul(one_, a) == a);
}

TEST_CASE("div examples") {
  // 1 / (1 - q) = 1 + q + q^2 + ...
  auto g = div(P({0, 6}, {{0, 1}}), P({0, 6}, {{0, 1}, {1, -1}}));
  CHECK(g == P({0, 6}, {{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}}));
  CHECK_THROWS_AS(div(P({0, 6}, {{0, 1}}), P({0, 6}, {{0, 2}, {1, 1}})), NotInvertible);
  CHECK_THROWS_AS(div(P({0, 6}, {{0, 1}}), LaurentSeries(Window{0, 6})), NotInvertible);
  // negative leading coefficient and a Laurent denominator
  auto h = div(P({0, 8}, {{0, 1}}), P({-1, 8}, {{-1, -1}, {1, 1}}));
  // 1 / (-q^-1 + q) = -q / (1 - q^2) = -q - q^3 - ...
  CHECK(h.coeff_at(1) == -1);
  CHECK(h.coeff_at(3) == -1);
  CHECK(h.coeff_at(2) == 0);
}

TEST_CASE("shift") {
  auto g = P({0, 5}, {{0, 1}, {3, 2}});
  CHECK(shift(g, 0) == g);
  CHECK(shift(monomial(1, -1, {-1, 3}), 1) == monomial(1, 0, {0, 4}));
  CHECK(shift(g, 2).window() == Window{2, 7});
}

TEST_CASE("text and json forms") {
  auto g = P({0, 10}, {{0, 1}, {2, -3}});
  CHECK(g.to_string() == "1*q^0+-3*q^2 window=[0,10)");
  auto j = g.to_json();
  CHECK(j["window"][0] == 0);
  CHECK(j["terms"][1][1] == "-3");
  CHECK(LaurentSeries::from_json(j) == g);
  mpz_class big("123456789012345678901234567890");
  auto b = monomial(big, 1, {0, 3});
  CHECK(LaurentSeries::from_json(b.to_json()) == b);
}

TEST_CASE("ring laws on random series") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    Window w{-3, 30};
    auto a = oracle::random_series(rng, w), b = oracle::random_series(rng, w),
         c = oracle::random_series(rng, w);
    CHECK(add(a, b) == add(b, a));
    CHECK(mul(a, b) == mul(b, a));
    CHECK(agree_on_common(mul(mul(a, b), c), mul(a, mul(b, c))));
    CHECK(agree_on_common(mul(a, add(b, c)), add(mul(a, b), mul(a, c))));
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
  }
}

TEST_CASE("truncated product agrees with the full polynomial product") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<int> lo(-5, 5), len(1, 40), dens(5, 100);
    Window wa{lo(rng), 0}, wb{lo(rng), 0};
    wa.hi = wa.lo + len(rng);
    wb.hi = wb.lo + len(rng);
    // polynomials supported inside their windows are exactly known everywhere
    auto a = oracle::random_series(rng, wa, dens(rng));
    auto b = oracle::random_series(rng, wb, dens(rng));
    auto c = mul(a, b);
    CHECK(c.window().lo == wa.lo + wb.lo);
    CHECK(c.window().hi >= std::min(wa.lo + wb.hi, wb.lo + wa.hi));
    auto full = oracle::mul(oracle::to_poly(a), oracle::to_poly(b));
    // only the guaranteed part is compared: beyond hi the inputs were truncated
    CHECK(oracle::matches(c, full));
  }
}

TEST_CASE("sparse path of mul") {
  // a very wide window with few terms goes through the map accumulator
  auto a = P({0, 2000000}, {{0, 1}, {1000000, 1}});
  auto b = P({0, 2000000}, {{0, 1}, {999999, -1}});
  auto c = mul(a, b);
  CHECK(c.coeff_at(1999999) == -1);
  CHECK(c.coeff_at(999999) == -1);
  CHECK(c.size() == 4);
}

TEST_CASE("div then mul round trip") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    Window w{0, 35};
    auto a = oracle::random_series(rng, w);
    auto b = oracle::random_series(rng, w);
    std::vector<Term> t(b.terms().begin(), b.terms().end());
    t.emplace_back(-2, trial % 2 ? 1 : -1);  // unit leading term below the rest
    auto bb = LaurentSeries::from_terms(Window{-2, 35}, t);
    auto c = div(a, bb);
    CHECK(agree_on_common(mul(bb, c), a));
  }
}

TEST_CASE("dilate") {
  auto g = P({0, 4}, {{0, 1}, {1, -1}, {3, 2}});
  auto d = dilate(g, 3);
  CHECK(d.window() == Window{0, 12});
  CHECK(d.coeff_at(9) == 2);
  CHECK(d.coeff_at(10) == 0);
}

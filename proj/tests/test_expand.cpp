#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "thetavanish/expand.hpp"
#include "thetavanish/huffing.hpp"

using namespace thetavanish;

namespace {

LaurentSeries th(int kappa, Exp x, Exp y, Window w) { return theta_sum({kappa, x, y}, w); }

// Exact equality on [?, hi): both series known there, same terms below hi.
bool same(const LaurentSeries& a, const LaurentSeries& b, Exp hi) {
  REQUIRE(a.window().hi >= hi);
  REQUIRE(b.window().hi >= hi);
  return a.truncate(hi).terms() == b.truncate(hi).terms();
}

LaurentSeries times(const LaurentSeries& a, int c) { return scale(a, c); }

}  // namespace

TEST_CASE("tau") {
  CHECK(tau({0, 0}) == IndexTuple{0, 0});
  CHECK(tau({1, 2}) == IndexTuple{1, 1});
  CHECK_THROWS(tau({2}));
  for (int m = 1; m <= 5; ++m) {
    auto all = index_set(m);
    std::set<IndexTuple> image;
    for (const auto& t : all) {
      CHECK(in_index_set(tau(t)));
      CHECK(tau(tau(t)) == t);
      image.insert(tau(t));
    }
    CHECK(image.size() == all.size());
  }
  CHECK(index_set(3).size() == 24);
}

TEST_CASE("sigma") {
  CHECK(same(sigma({0}, 2, {0, 40}), th(0, 2, 2, {0, 40}), 40));
  auto s1 = sigma({1}, 2, {0, 40});
  CHECK(s1.coeff_at(0) == 2);
  CHECK(s1.coeff_at(4) == 2);
  CHECK(s1.coeff_at(12) == 2);
  CHECK(s1.coeff_at(2) == 0);
  for (const auto& t : index_set(2)) CHECK(same(sigma(t, 2, {0, 40}), sigma(tau(t), 2, {0, 40}), 40));
  for (const auto& t : index_set(3))
    for (Exp A : {1, 3}) CHECK(same(sigma(t, A, {0, 60}), sigma(tau(t), A, {0, 60}), 60));
}

TEST_CASE("M symmetry") {
  CHECK(symmetry_Ms(3, 1, 3, {0, 80}));
  CHECK(symmetry_Ms(4, 2, 2, {0, 80}));
  CHECK(symmetry_Ms(5, 2, 1, {0, 60}));
  for (int m = 2; m <= 6; ++m)
    for (int s = 1; s < m; ++s) CHECK(symmetry_Ms(m, s, 2, {0, 60}));
}

TEST_CASE("M closed form for m = 2") {
  for (int s = 0; s < 2; ++s) {
    Exp A = 3;
    auto direct = shift(th(0, (1 + s) * A, (1 - s) * A, {0, 90}), A * (s * s - s) / 2);
    CHECK(same(cofactor_M(2, s, A, 90), direct, 90));
  }
}

TEST_CASE("power expansion re-sums to the power") {
  const Window w{0, 60};
  {
    auto e = power_expansion(0, 1, 1, 0, 1, w);
    REQUIRE(e.terms.size() == 1);
    CHECK(same(e.terms[0].cofactor, one(w), 60));
  }
  // k=1, A=6, A'=2 is f(q^3, q^3)^3
  CHECK(same(evaluate(power_expansion(0, 1, 6, 2, 3, w), w), pow(th(0, 3, 3, w), 3), 60));
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> mm(1, 6), kap(0, 1), aa(1, 9), kk(-4, 4);
  for (int trial = 0; trial < 25; ++trial) {
    int m = mm(rng), kappa = kap(rng);
    Exp A = aa(rng), Ap = std::uniform_int_distribution<int>(0, static_cast<int>(A))(rng), k = kk(rng);
    Window v{-30, 70};
    auto lhs = theta_monomial_product(0, 0, std::vector<ThetaSpec>(m, {kappa, k + Ap, -k + A - Ap}), v.hi);
    auto rhs = evaluate(power_expansion(kappa, k, A, Ap, m, v), v);
    CHECK_MESSAGE(same(lhs, rhs, v.hi), "m=" << m << " kappa=" << kappa << " k=" << k << " A=" << A
                                              << " A'=" << Ap);
  }
}

TEST_CASE("pair expansions re-sum to twice / four times the power") {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<int> mm(1, 5), kap(0, 1), aa(1, 8), kk(-3, 3);
  Window w{-20, 60};
  CHECK(same(evaluate(pair_expansion(0, 1, 5, 2, 2, w), w), times(pow(th(0, 3, 2, w), 2), 2), 60));
  CHECK(same(evaluate(pair_expansion(1, 1, 5, 2, 3, w), w), times(pow(th(1, 3, 2, w), 3), 2), 60));
  for (int trial = 0; trial < 20; ++trial) {
    int m = mm(rng), kappa = kap(rng);
    Exp A = aa(rng), Ap = std::uniform_int_distribution<int>(0, static_cast<int>(A))(rng), k = kk(rng);
    auto lhs = theta_monomial_product(0, 0, std::vector<ThetaSpec>(m, {kappa, k + Ap, -k + A - Ap}), w.hi);
    auto e = pair_expansion(kappa, k, A, Ap, m, w);
    CHECK(e.denominator == 2);
    CHECK_MESSAGE(same(times(lhs, 2), evaluate(e, w), w.hi),
                  "m=" << m << " kappa=" << kappa << " k=" << k << " A=" << A << " A'=" << Ap);
  }
  for (int trial = 0; trial < 20; ++trial) {
    int m = mm(rng), kappa = kap(rng);
    Exp Ap = aa(rng), k = kk(rng);
    auto lhs = theta_monomial_product(0, 0, std::vector<ThetaSpec>(m, {kappa, k + Ap, -k + Ap}), w.hi);
    auto e = pair_expansion_symmetric(kappa, k, Ap, m, w);
    CHECK(e.denominator == 4);
    CHECK_MESSAGE(same(times(lhs, 4), evaluate(e, w), w.hi),
                  "m=" << m << " kappa=" << kappa << " k=" << k << " A'=" << Ap);
  }
}

TEST_CASE("two-power expansion") {
  Window w{0, 80};
  {
    // m1 = 2, m2 = 1, kappa = 1, k = 1, A = 9, A' = 3
    auto lhs = mul(pow(th(1, 4, 5, w), 2), th(1, 7, 2, w));
    CHECK(same(lhs, evaluate(two_power_expansion(1, 1, 9, 3, 2, 1, w), w), 80));
  }
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> mm(1, 4), kap(0, 1), aa(1, 8), kk(-3, 3);
  int done = 0;
  while (done < 25) {
    int m1 = mm(rng), m2 = mm(rng), kappa = kap(rng);
    if (m1 + m2 > 5) continue;
    Exp A = aa(rng), Ap = std::uniform_int_distribution<int>(0, static_cast<int>(A))(rng), k = kk(rng);
    Window v{-20, 60};
    std::vector<ThetaSpec> factors(m1, ThetaSpec{kappa, k + Ap, -k + A - Ap});
    factors.insert(factors.end(), m2, ThetaSpec{kappa, k + A - Ap, -k + Ap});
    auto lhs = theta_monomial_product(0, 0, factors, v.hi);
    auto e = two_power_expansion(kappa, k, A, Ap, m1, m2, v);
    CHECK(e.terms.size() == static_cast<std::size_t>(m1 + m2));
    CHECK_MESSAGE(same(lhs, evaluate(e, v), v.hi),
                  "m1=" << m1 << " m2=" << m2 << " kappa=" << kappa << " k=" << k << " A=" << A
                        << " A'=" << Ap);
    // cofactors are series in q^gcd(A, A')
    const Exp g = std::gcd(A, Ap);
    for (const auto& t : e.terms)
      for (const auto& [ex, c] : t.cofactor.terms()) CHECK(ex % g == 0);
    ++done;
  }
}

TEST_CASE("quintuple product and quotient expansion") {
  CHECK(quintuple_check(0, 1, 5, {0, 80}));
  CHECK(quintuple_check(1, 1, 5, {0, 80}));
  CHECK(quintuple_check(1, 2, 7, {0, 80}));
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    Exp mu = std::uniform_int_distribution<int>(3, 15)(rng);
    Exp k = std::uniform_int_distribution<int>(1, static_cast<int>((mu - 1) / 2))(rng);
    CHECK(quintuple_check(trial % 2, k, mu, {0, 90}));
  }
  auto check_q = [](int kappa, Exp k, Exp mu, int m, Exp hi) {
    Window w{0, hi};
    auto lhs = mul(times(quotient_power(kappa, k, mu, m, w), 2), pow(th(1, mu, 2 * mu, w), m));
    auto e = quotient_expansion(kappa, k, mu, m, w);
    return same(lhs, evaluate(e, w), hi);
  };
  CHECK(check_q(0, 1, 5, 1, 80));
  CHECK(quotient_expansion(0, 1, 5, 1, {0, 80}).terms.size() == 2);
  CHECK(check_q(0, 1, 7, 2, 100));
  CHECK(check_q(1, 1, 9, 3, 120));
  for (int trial = 0; trial < 20; ++trial) {
    Exp mu = std::uniform_int_distribution<int>(3, 11)(rng);
    Exp k = std::uniform_int_distribution<int>(1, static_cast<int>((mu - 1) / 2))(rng);
    int m = std::uniform_int_distribution<int>(1, 3)(rng);
    CHECK_MESSAGE(check_q(trial % 2, k, mu, m, 70), "k=" << k << " mu=" << mu << " m=" << m);
  }
  CHECK_THROWS(quotient_expansion(0, 3, 5, 2, {0, 10}));
}

TEST_CASE("Schroter") {
  CHECK(schroter_check(1, 1, 0, 0, {0, 80}));
  CHECK(schroter_check(2, 1, 1, 0, {0, 80}));
  CHECK(schroter_check(1, 2, 0, 1, {0, 80}));
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 25; ++trial) {
    Exp A = std::uniform_int_distribution<int>(1, 4)(rng), B = std::uniform_int_distribution<int>(1, 4)(rng);
    Exp x = std::uniform_int_distribution<int>(-5, 5)(rng), y = std::uniform_int_distribution<int>(-5, 5)(rng);
    CHECK_MESSAGE(schroter_check(A, B, x, y, {-40, 80}), A << " " << B << " " << x << " " << y);
  }
}

TEST_CASE("only the quotient power") {
  CHECK(only_quotient_power_check(0, 1, 0, 1, {0, 120}));
  CHECK(only_quotient_power_check(0, 1, 1, 2, {0, 120}));
  CHECK(only_quotient_power_check(1, 1, 0, 1, {0, 150}));
  CHECK(only_quotient_power_check(1, 2, 1, 4, {0, 200}));
  CHECK(only_quotient_power_check(2, 1, 0, 2, {0, 200}));
  CHECK_THROWS(only_quotient_power_check(0, 1, 0, 3, {0, 50}));
  // sanity: the same huffing on a non-matching shift is not zero
  auto g = shift(quotient_power(0, 1, 3, 1, {0, 60}), -1);
  CHECK_FALSE(huff(g, 3).is_zero());
}

TEST_CASE("vanishing pair") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    Exp M = std::uniform_int_distribution<int>(1, 9)(rng), mu = std::uniform_int_distribution<int>(1, 3)(rng);
    Exp k = std::uniform_int_distribution<int>(-8, 8)(rng);
    CHECK(vanishing_pair_check(M, mu, k, trial % 2, {-100, 300}));
  }
}

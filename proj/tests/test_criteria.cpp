#include "doctest.h"
#include "oracles.hpp"
#include "thetavanish/criteria.hpp"
#include "thetavanish/huffing.hpp"

using namespace thetavanish;

namespace {

CriterionInput make(long M, long A, long Ap, long B, long Bp, long u, long v, long w, int kappa,
                    int lambda) {
  CriterionInput in;
  in.M = M;
  in.A = A;
  in.Aprime = Ap;
  in.B = B;
  in.Bprime = Bp;
  in.u = u;
  in.v = v;
  in.w = w;
  in.kappa = kappa;
  in.lambda = lambda;
  return in;
}

bool same_below(const LaurentSeries& a, const LaurentSeries& b, Exp hi) {
  REQUIRE(a.window().hi >= hi);
  REQUIRE(b.window().hi >= hi);
  return a.truncate(hi).terms() == b.truncate(hi).terms();
}

LaurentSeries huffed(const CriterionInput& in, Exp hi) {
  return huff(build_H(in, {0, hi}), to_i64(in.M));
}

CriterionInput random_input(std::mt19937_64& rng) {
  auto U = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  long A = U(1, 4), B = U(1, 4);
  return make(U(1, 12), A, U(0, static_cast<int>(A)), B, U(0, static_cast<int>(B)), U(-6, 6), U(-6, 6),
              U(-10, 10), U(0, 1), U(0, 1));
}

}  // namespace

TEST_CASE("build_H") {
  auto in = make(5, 1, 0, 2, 0, 1, 1, 0, 0, 0);
  Window w{0, 100};
  CHECK(same_below(build_H(in, w), mul(theta_sum({0, 1, 4}, w), theta_sum({0, 1, 9}, w)), 100));
  auto shifted = in;
  shifted.w = 3;
  CHECK(same_below(build_H(shifted, w), shift(build_H(in, w), 3), 100));
  // triple product oracle: independent Pochhammer expansions
  auto in2 = make(7, 1, 0, 1, 0, 2, 3, 0, 1, 0);
  std::vector<std::pair<int, std::int64_t>> f;
  for (std::int64_t e = 0; e < 100; e += 7) {
    f.push_back({1, e + 2});
    f.push_back({1, e + 5});
    f.push_back({1, e + 7});
    f.push_back({-1, e + 3});
    f.push_back({-1, e + 4});
    f.push_back({1, e + 7});
  }
  CHECK(oracle::matches(build_H(in2, w), oracle::binomial_product(f, 100)));
  CHECK_THROWS(build_H(make(0, 1, 0, 1, 0, 1, 1, 0, 0, 0), w));
}

TEST_CASE("K by CRT") {
  CHECK(crt_K(5, 1) == 1);
  CHECK(crt_K(5, 3) == 6);
  CHECK(crt_K(7, 2) == 8);
  CHECK(crt_K(1, 1) == 0);
  CHECK_THROWS(crt_K(4, 2));
}

TEST_CASE("huff_analyze examples") {
  auto z = huff_analyze(make(6, 1, 0, 1, 0, 2, 4, 1, 0, 0));
  CHECK(z.kind == HuffAnalysis::Kind::Zero);
  CHECK(huffed(make(6, 1, 0, 1, 0, 2, 4, 1, 0, 0), 200).is_zero());

  // M = 5 with u = v = 1, A = 1, B = 2: 3 does not divide 5, so no closed form
  auto bad = huff_analyze(make(5, 1, 0, 2, 0, 1, 1, 0, 0, 1));
  CHECK(bad.kind == HuffAnalysis::Kind::AssumptionFailed);
  CHECK(bad.reason == "d_u(Av^2+Bu^2) | Av*dM");

  auto in = make(3, 1, 0, 2, 0, 1, 1, 0, 0, 1);
  auto h = huff_analyze(in);
  REQUIRE(h.kind == HuffAnalysis::Kind::Closed);
  CHECK(same_below(evaluate(*h.closed, {0, 200}), huffed(in, 200), 200));
}

TEST_CASE("closed form soundness on random inputs") {
  std::mt19937_64 rng(61);
  int closed = 0, zero = 0;
  for (int trial = 0; trial < 4000 && closed < 60; ++trial) {
    auto in = random_input(rng);
    auto h = huff_analyze(in);
    const Exp hi = 150;
    if (h.kind == HuffAnalysis::Kind::Closed) {
      CHECK_MESSAGE(same_below(evaluate(*h.closed, {0, hi}), huffed(in, hi), hi), to_json(in).dump());
      ++closed;
    } else if (h.kind == HuffAnalysis::Kind::Zero && zero < 60) {
      CHECK_MESSAGE(huffed(in, hi).is_zero(), to_json(in).dump());
      ++zero;
    }
  }
  CHECK(closed >= 50);
  CHECK(zero >= 50);
}

TEST_CASE("J criterion") {
  // first Type II family, l = m = 0, mu = 1, k = 1, kappa = 0, lambda = 1
  auto in = make(3, 1, 0, 2, 0, 1, 1, 2, 0, 1);
  auto j = check_zero_by_J(in);
  REQUIRE(j);
  CHECK(in.u * j->m0 + in.v * j->n0 + in.w == j->J * in.M);
  CHECK(huffed(in, 150).is_zero());
  // sign condition fails when (-v kappa + u lambda)/d is even
  CHECK_FALSE(check_zero_by_J(make(3, 1, 0, 2, 0, 1, 1, 2, 0, 0)));
  CHECK_FALSE(check_zero_by_J(make(3, 1, 0, 2, 0, 1, 1, 2, 1, 1)));
  // d* does not divide w
  CHECK_FALSE(check_zero_by_J(make(6, 1, 0, 1, 0, 2, 4, 1, 0, 1)));

  std::mt19937_64 rng(67);
  int hits = 0;
  for (int trial = 0; trial < 20000 && hits < 50; ++trial) {
    auto r = random_input(rng);
    if (auto jj = check_zero_by_J(r)) {
      CHECK_MESSAGE(huffed(r, 150).is_zero(), to_json(r).dump());
      ++hits;
    }
  }
  CHECK(hits >= 30);
}

TEST_CASE("first cancelation") {
  // first Type I family, l = 1, m = 0, mu = 1, k = 1, kappa = 0, lambda = 1, tau = 0
  auto in = make(5, 2, 0, 3, 1, 2, 3, -4, 0, 1);
  auto c = pair_cancel_hat(in);
  REQUIRE(c.kind == CancelOutcome::Kind::Pair);
  CHECK(c.epsilon == 1);
  CHECK(c.partner->Bprime == 2);
  CHECK(c.partner->w == -3);
  auto lhs = huffed(in, 150), rhs = huffed(*c.partner, 150);
  CHECK(same_below(lhs, neg(rhs), 150));
  CHECK_FALSE(lhs.is_zero());

  // d* does not divide w, d*B | 2B'v
  auto bz = make(6, 1, 0, 2, 1, 2, 4, 1, 0, 0);
  auto cb = pair_cancel_hat(bz);
  CHECK(cb.kind == CancelOutcome::Kind::BothZero);
  CHECK(huffed(bz, 150).is_zero());
  CHECK(huffed(*cb.partner, 150).is_zero());

  auto na = pair_cancel_hat(make(5, 1, 0, 2, 1, 1, 2, 0, 0, 0));
  CHECK(na.kind == CancelOutcome::Kind::NotApplicable);
  CHECK_FALSE(na.reason.empty());
  CHECK_THROWS(pair_cancel_hat(make(5, 1, 0, 3, 1, 1, 1, 0, 0, 0)));
}

TEST_CASE("second cancelation") {
  // first Type I family, l = 1, m = 0, xi = 1, tau = 0
  auto in = make(5, 2, 1, 3, 1, 2, 3, -3, 0, 1);
  auto c = pair_cancel_check(in);
  REQUIRE(c.kind == CancelOutcome::Kind::Pair);
  CHECK(c.epsilon == 1);
  CHECK(same_below(huffed(in, 150), scale(huffed(*c.partner, 150), c.epsilon ? -1 : 1), 150));
  CHECK_THROWS(pair_cancel_check(make(5, 2, 1, 3, 1, 1, 1, 0, 0, 0)));
}

TEST_CASE("cancelation soundness on random inputs") {
  std::mt19937_64 rng(71);
  int pairs = 0, both = 0, pairs2 = 0;
  for (int trial = 0; trial < 20000 && (pairs < 40 || pairs2 < 40); ++trial) {
    auto in = random_input(rng);
    const Exp hi = 150;
    bool hat_ok = divides(in.B, 2 * in.Bprime * in.v);
    if (hat_ok && pairs < 40) {
      auto c = pair_cancel_hat(in);
      if (c.kind == CancelOutcome::Kind::Pair) {
        CHECK_MESSAGE(same_below(huffed(in, hi), scale(huffed(*c.partner, hi), c.epsilon ? -1 : 1), hi),
                      to_json(in).dump());
        ++pairs;
      } else if (c.kind == CancelOutcome::Kind::BothZero) {
        CHECK(huffed(in, hi).is_zero());
        CHECK(huffed(*c.partner, hi).is_zero());
        ++both;
      }
    }
    bool check_ok = divides(in.A * in.B, 2 * (in.Aprime * in.B * in.u + in.A * in.Bprime * in.v));
    if (check_ok && pairs2 < 40) {
      auto c = pair_cancel_check(in);
      if (c.kind == CancelOutcome::Kind::Pair) {
        CHECK_MESSAGE(same_below(huffed(in, hi), scale(huffed(*c.partner, hi), c.epsilon ? -1 : 1), hi),
                      to_json(in).dump());
        ++pairs2;
      }
    }
  }
  CHECK(pairs >= 30);
  CHECK(pairs2 >= 30);
  CHECK(both >= 5);
}

TEST_CASE("self-paired input") {
  // A = 2A', B = 2B': the partner is the input itself
  std::mt19937_64 rng(73);
  int seen = 0;
  for (int trial = 0; trial < 5000 && seen < 20; ++trial) {
    auto in = random_input(rng);
    in.A = 2 * in.Aprime;
    in.B = 2 * in.Bprime;
    if (in.A < 1 || in.B < 1) continue;
    auto c = pair_cancel_check(in);
    CHECK(*c.partner == in);
    if (c.kind != CancelOutcome::Kind::Pair) continue;
    // H = (-1)^eps H, so an odd eps forces zero
    if (c.epsilon) CHECK(huffed(in, 150).is_zero());
    ++seen;
  }
  CHECK(seen > 0);
}

TEST_CASE("K independence") {
  std::mt19937_64 rng(79);
  int seen = 0;
  for (int trial = 0; trial < 20000 && seen < 30; ++trial) {
    auto in = random_input(rng);
    if (!divides(in.B, 2 * in.Bprime * in.v)) continue;
    auto c = pair_cancel_hat(in);
    if (c.kind != CancelOutcome::Kind::Pair) continue;
    // a second admissible K
    const Int ds = gcd(in.u, in.v, in.M), d = gcd(in.u, in.v), g = gcd(in.u, in.v, in.w);
    const Int K2 = *c.K + d * in.M / (ds * g);
    const Int &A = in.A, &Ap = in.Aprime, &B = in.B, &Bp = in.Bprime, &u = in.u, &v = in.v, &w = in.w;
    const Int S = A * v * v + B * u * u;
    const Int X = (A - 2 * Ap) * v * v - (B - 2 * Bp) * u * v - 2 * B * u * w * K2;
    const Int Y = B * (A - 2 * Ap) * u * v + A * (B - 2 * Bp) * v * v + 2 * A * B * v * w * K2;
    REQUIRE(divides(S, X));
    REQUIRE(divides(B * S, Y));
    const Int eps = in.kappa * (X / S) - in.lambda * (Y / (B * S));
    CHECK((mpz_odd_p(eps.get_mpz_t()) ? 1 : 0) == c.epsilon);
    ++seen;
  }
  CHECK(seen >= 10);
}

TEST_CASE("json forms") {
  auto in = make(5, 2, 0, 3, 1, 2, 3, -4, 0, 1);
  CHECK(criterion_from_json(to_json(in)) == in);
  auto j = to_json(pair_cancel_hat(in));
  CHECK(j["branch"] == "pair");
  CHECK(j["epsilon"] == 1);
  CHECK(to_json(huff_analyze(in))["branch"] == "closed_form");
  CHECK(to_json(check_zero_by_J(make(3, 1, 0, 2, 0, 1, 1, 2, 0, 1)))["branch"] == "zero");
}

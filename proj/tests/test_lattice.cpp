#include <random>
#include <set>

#include "doctest.h"
#include "thetavanish/lattice.hpp"

using namespace thetavanish;

namespace {

bool solves(long u, long v, long w, long M, long m, long n) {
  long r = (u * m + v * n + w) % M;
  return r == 0;
}

}  // namespace

TEST_CASE("gcd_profile") {
  auto p = gcd_profile(2, 3, 5);
  CHECK(p.dstar == 1);
  CHECK(p.d == 1);
  CHECK(p.du == 1);
  CHECK(p.dv == 1);
  CHECK(p.uprime == 2);
  CHECK(p.vprime == 3);
  auto q = gcd_profile(2, 4, 6);
  CHECK(q.dstar == 2);
  CHECK(q.d == 2);
  CHECK(q.du == 2);
  CHECK(q.dv == 2);
  CHECK(q.uprime == 1);
  CHECK(q.vprime == 2);
  CHECK(gcd_profile(0, 0, 7).dstar == 7);
}

TEST_CASE("homogeneous examples") {
  auto a = solve_homogeneous(1, 1, 2);
  CHECK(a.index() == 2);
  CHECK(contains(a, {1, 1}));
  CHECK_FALSE(contains(a, {1, 0}));
  auto b = solve_homogeneous(2, 3, 5);
  CHECK(b.index() == 5);
  CHECK(contains(b, {1, 1}));
  CHECK(contains(b, {0, 5}));
  auto c = solve_homogeneous(1, 0, 3);
  CHECK(c.index() == 3);
  CHECK(contains(c, {3, 7}));
  CHECK_FALSE(contains(c, {1, 0}));
  auto z = solve_homogeneous(0, 0, 7);
  CHECK(z.index() == 1);
}

TEST_CASE("inhomogeneous examples") {
  CHECK_FALSE(solve_inhomogeneous(2, 4, 1, 6));
  auto l = solve_inhomogeneous(2, 3, 1, 5);
  REQUIRE(l);
  CHECK(solves(2, 3, 1, 5, l->shift[0].get_si(), l->shift[1].get_si()));
  CHECK(contains(*l, l->shift));
  auto h = solve_inhomogeneous(1, 1, 0, 2);
  REQUIRE(h);
  CHECK(h->shift == Vec2{0, 0});
  CHECK_FALSE(solve_inhomogeneous(0, 0, 3, 7));
  REQUIRE(solve_inhomogeneous(0, 0, 14, 7));
}

TEST_CASE("lattice equals brute-force solution set") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> Md(1, 30), uv(-60, 60), wd(-100, 100);
  for (int trial = 0; trial < 150; ++trial) {
    long M = Md(rng), u = uv(rng), v = uv(rng), w = wd(rng);
    auto lat = solve_inhomogeneous(u, v, w, M);
    const auto prof = gcd_profile(u, v, M);
    CHECK(lat.has_value() == divides(prof.dstar, w));
    bool ok = true;
    for (long m = -3 * M; m <= 3 * M && ok; ++m)
      for (long n = -3 * M; n <= 3 * M && ok; ++n) {
        bool brute = solves(u, v, w, M, m, n);
        bool inl = lat && contains(*lat, {m, n});
        ok = brute == inl;
      }
    CHECK(ok);
    auto hom = solve_homogeneous(u, v, M);
    CHECK(hom.index() * prof.dstar == M);
    CHECK_FALSE(check_conditions(hom, u, v, M));
  }
}

TEST_CASE("hermite form keeps the point set") {
  auto lat = *solve_inhomogeneous(6, 10, 4, 28);
  auto h = hermite_normal_form(lat);
  CHECK(h.basis2[0] == 0);
  CHECK(h.basis1[1] >= 0);
  CHECK(h.basis1[1] < h.basis2[1]);
  for (long m = -30; m <= 30; ++m)
    for (long n = -30; n <= 30; ++n) CHECK(contains(lat, {m, n}) == contains(h, {m, n}));
}

TEST_CASE("prescribed K shift") {
  // (u/d) m0 + (v/d) n0 = -w K / d
  auto s = solve_prescribed_K(4, 6, 2, 3);
  REQUIRE(s);
  CHECK(2 * (*s)[0] + 3 * (*s)[1] == -3);
  CHECK_FALSE(solve_prescribed_K(4, 6, 1, 1));
  CHECK_FALSE(solve_prescribed_K(0, 0, 1, 1));
}

TEST_CASE("json form") {
  auto j = to_json(solve_homogeneous(1, 1, 2));
  CHECK(j["shift"][0] == 0);
  CHECK(j["basis"].size() == 2);
}

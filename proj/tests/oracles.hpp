// Naive reference computations used as test oracles.  Deliberately written
// without touching the library's arithmetic.
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "doctest.h"
#include "thetavanish/series.hpp"

namespace doctest {
template <>
struct StringMaker<thetavanish::LaurentSeries> {
  static String convert(const thetavanish::LaurentSeries& s) { return s.to_string().c_str(); }
};
}  // namespace doctest

namespace oracle {

using Poly = std::map<std::int64_t, mpz_class>;  // exponent -> coeff, may hold zeros

inline Poly mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) r[ea + eb] += ca * cb;
  return r;
}

// f(sa q^x, sb q^y) by brute summation over |n| <= N.
inline Poly theta(int sa, std::int64_t x, int sb, std::int64_t y, int N) {
  Poly r;
  for (std::int64_t n = -N; n <= N; ++n) {
    std::int64_t e1 = n * (n + 1) / 2, e2 = n * (n - 1) / 2;
    int s = 1;
    if ((e1 & 1) && sa < 0) s = -s;
    if ((e2 & 1) && sb < 0) s = -s;
    r[x * e1 + y * e2] += s;
  }
  return r;
}

// prod over e in exps of (1 - s q^e), expanded fully.
inline Poly binomial_product(const std::vector<std::pair<int, std::int64_t>>& factors,
                             std::int64_t hi) {
  Poly r{{0, 1}};
  for (auto [s, e] : factors) {
    Poly f{{0, 1}, {e, -s}};
    Poly p = mul(r, f);
    r.clear();
    for (auto& [k, c] : p)
      if (k < hi) r[k] = c;
  }
  return r;
}

inline mpz_class at(const Poly& p, std::int64_t e) {
  auto it = p.find(e);
  return it == p.end() ? mpz_class(0) : it->second;
}

// True when s agrees with p on s's window.
inline bool matches(const thetavanish::LaurentSeries& s, const Poly& p) {
  for (auto e = s.window().lo; e < s.window().hi; ++e)
    if (s.coeff_at(e) != at(p, e)) return false;
  return true;
}

inline thetavanish::LaurentSeries random_series(std::mt19937_64& rng, thetavanish::Window w,
                                                int density_pct = 60, int cmax = 9) {
  std::uniform_int_distribution<int> pct(0, 99), coef(-cmax, cmax);
  std::vector<thetavanish::Term> t;
  for (auto e = w.lo; e < w.hi; ++e)
    if (pct(rng) < density_pct) t.emplace_back(e, coef(rng));
  return thetavanish::LaurentSeries::from_terms(w, t);
}

inline Poly to_poly(const thetavanish::LaurentSeries& s) {
  Poly p;
  for (const auto& [e, c] : s.terms()) p[e] = c;
  return p;
}

}  // namespace oracle

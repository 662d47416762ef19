#include "thetavanish/theta.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thetavanish {

namespace {

using i128 = __int128;

i128 theta_exp(Exp x, Exp y, i128 n) {
  // x n(n+1)/2 + y n(n-1)/2, always an integer
  return (static_cast<i128>(x) * n * (n + 1)) / 2 + (static_cast<i128>(y) * n * (n - 1)) / 2;
}

// Integer n nearest the vertex of the exponent parabola.
i128 vertex(Exp x, Exp y) {
  // exponent = ((x+y) n^2 + (x-y) n) / 2, vertex at n = (y-x) / (2(x+y))
  const long double v = static_cast<long double>(y - x) / (2.0L * static_cast<long double>(x + y));
  return static_cast<i128>(std::floor(v));
}

// In-place multiply (times > 0) or divide (times < 0) of a dense power
// series on [0, n) by (1 - s q^e).
void apply_binomial(std::vector<mpz_class>& c, Exp e, int s, int times) {
  const std::size_t n = c.size();
  if (e <= 0) throw std::invalid_argument("binomial exponent must be positive");
  const std::size_t ue = static_cast<std::size_t>(e);
  if (ue >= n) return;
  for (int t = 0; t < times; ++t) {
    for (std::size_t idx = n; idx-- > ue;) {
      if (s > 0)
        c[idx] -= c[idx - ue];
      else
        c[idx] += c[idx - ue];
    }
  }
  for (int t = 0; t < -times; ++t) {
    for (std::size_t idx = ue; idx < n; ++idx) {
      if (s > 0)
        c[idx] += c[idx - ue];
      else
        c[idx] -= c[idx - ue];
    }
  }
}

LaurentSeries dense_to_series(const std::vector<mpz_class>& c, Window w) {
  // c covers [0, w.hi) when w.hi > 0
  Window out{std::min<Exp>(w.lo, 0), w.hi};
  if (w.hi <= 0) return LaurentSeries(Window{w.lo, w.hi});
  std::vector<Term> terms;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) terms.emplace_back(static_cast<Exp>(i), c[i]);
  return LaurentSeries::from_terms(out, std::move(terms));
}

}  // namespace

Exp theta_min_exponent(Exp x, Exp y) {
  if (x + y < 1) throw std::invalid_argument("theta needs x + y >= 1");
  const i128 v = vertex(x, y);
  i128 best = theta_exp(x, y, v);
  for (i128 n = v - 1; n <= v + 2; ++n) best = std::min(best, theta_exp(x, y, n));
  return static_cast<Exp>(best);
}

LaurentSeries theta_general(const SignedTheta& spec, Window w) {
  const Exp x = spec.x, y = spec.y;
  if (x + y < 1) throw std::invalid_argument("theta needs x + y >= 1");
  if ((spec.sa != 1 && spec.sa != -1) || (spec.sb != 1 && spec.sb != -1))
    throw std::invalid_argument("theta signs must be +-1");
  std::vector<Term> terms;
  auto emit = [&](i128 n) {
    const i128 e = theta_exp(x, y, n);
    // sign sa^(n(n+1)/2) * sb^(n(n-1)/2)
    const i128 pa = (n * (n + 1) / 2) & 1, pb = (n * (n - 1) / 2) & 1;
    int sg = 1;
    if (pa && spec.sa < 0) sg = -sg;
    if (pb && spec.sb < 0) sg = -sg;
    terms.emplace_back(static_cast<Exp>(e), sg);
  };
  // The exponent is convex in n, so the admissible n form an interval around
  // the vertex.
  const i128 v = vertex(x, y);
  for (i128 n = v; theta_exp(x, y, n) < w.hi; --n) emit(n);
  for (i128 n = v + 1; theta_exp(x, y, n) < w.hi; ++n) emit(n);
  Window out{w.lo, w.hi};
  if (!terms.empty()) out.lo = std::min(out.lo, theta_min_exponent(x, y));
  return LaurentSeries::from_terms(out, std::move(terms));
}

LaurentSeries theta_sum(const ThetaSpec& spec, Window w) {
  if (spec.kappa != 0 && spec.kappa != 1) throw std::invalid_argument("kappa must be 0 or 1");
  const int s = spec.kappa ? -1 : 1;
  return theta_general(SignedTheta{s, spec.x, s, spec.y}, w);
}

LaurentSeries pochhammer(int sign, Exp j, Exp r, Window w) {
  return poch_product({PochFactor{sign, j, r, 1}}, w);
}

LaurentSeries poch_product(const std::vector<PochFactor>& factors, Window w) {
  if (w.lo >= w.hi) throw SeriesError("empty window");
  std::vector<mpz_class> c(w.hi > 0 ? static_cast<std::size_t>(w.hi) : 0);
  if (!c.empty()) c[0] = 1;
  for (const auto& f : factors) {
    if (f.j < 1 || f.r < 1) throw std::invalid_argument("pochhammer needs j >= 1 and r >= 1");
    if (f.sign != 1 && f.sign != -1) throw std::invalid_argument("pochhammer sign must be +-1");
    if (f.power == 0) continue;
    for (Exp e = f.j; e < w.hi; e += f.r) apply_binomial(c, e, f.sign, f.power);
  }
  return dense_to_series(c, w);
}

LaurentSeries theta_prod(const ThetaSpec& spec, Window w) {
  if (spec.x < 1 || spec.y < 1) throw std::invalid_argument("product form needs x, y >= 1");
  if (spec.kappa != 0 && spec.kappa != 1) throw std::invalid_argument("kappa must be 0 or 1");
  // (-a; ab) has factors 1 + a (ab)^k, i.e. 1 - s q^(x + (x+y)k) with s = -(-1)^kappa
  const int s = spec.kappa ? 1 : -1;
  const Exp r = spec.x + spec.y;
  return poch_product({{s, spec.x, r, 1}, {s, spec.y, r, 1}, {1, r, r, 1}}, w);
}

std::string to_string(FamilyId id) {
  switch (id) {
    case FamilyId::alpha: return "alpha";
    case FamilyId::beta: return "beta";
    case FamilyId::gamma: return "gamma";
    case FamilyId::delta: return "delta";
    case FamilyId::epsilon: return "epsilon";
    case FamilyId::phi: return "phi";
    case FamilyId::psi: return "psi";
  }
  return "?";
}

std::optional<FamilyId> family_from_string(const std::string& s) {
  for (auto id : {FamilyId::alpha, FamilyId::beta, FamilyId::gamma, FamilyId::delta,
                  FamilyId::epsilon, FamilyId::phi, FamilyId::psi})
    if (to_string(id) == s) return id;
  return std::nullopt;
}

LaurentSeries family_series(FamilyId id, Exp i, Exp j, Exp r, unsigned l, unsigned m, Window w) {
  if (r < 1) throw std::invalid_argument("r must be positive");
  if (!(0 < i && i < r)) throw std::invalid_argument("need 0 < i < r");
  const bool wide = id == FamilyId::gamma || id == FamilyId::delta || id == FamilyId::epsilon;
  if (wide ? !(0 < j && j < 2 * r) : !(0 < j && j < r))
    throw std::invalid_argument(wide ? "need 0 < j < 2r" : "need 0 < j < r");

  const int L = static_cast<int>(l), Mp = static_cast<int>(m);
  // (s q^i, s q^{r-i}; q^r)^L
  auto pair = [](int s, Exp a, Exp rr, int p) {
    return std::vector<PochFactor>{{s, a, rr, p}, {s, rr - a, rr, p}};
  };
  std::vector<PochFactor> f;
  auto push = [&](std::vector<PochFactor> v) { f.insert(f.end(), v.begin(), v.end()); };
  switch (id) {
    case FamilyId::alpha:
      push(pair(1, i, r, L));
      push(pair(1, j, r, -Mp));
      break;
    case FamilyId::beta:
      push(pair(1, i, r, L));
      push(pair(-1, j, r, -Mp));
      break;
    case FamilyId::gamma:
      push(pair(-1, i, r, L));
      push(pair(1, j, 2 * r, Mp));
      break;
    case FamilyId::delta:
      push(pair(1, i, r, L));
      push(pair(-1, j, 2 * r, Mp));
      break;
    case FamilyId::epsilon:
      push(pair(1, i, r, L));
      push(pair(1, j, 2 * r, Mp));
      break;
    case FamilyId::phi:
      push(pair(-1, i, r, L));
      push(pair(1, j, r, Mp));
      break;
    case FamilyId::psi:
      push(pair(1, i, r, L));
      push(pair(1, j, r, Mp));
      break;
  }
  return poch_product(f, w);
}

}  // namespace thetavanish

#include "thetavanish/expand.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "thetavanish/huffing.hpp"
#include "thetavanish/numtheory.hpp"

namespace thetavanish {

namespace {

int parity(Exp e) { return static_cast<int>(((e % 2) + 2) % 2); }

ThetaSpec spec(Exp kappa, Exp x, Exp y) { return ThetaSpec{parity(kappa), x, y}; }

LaurentSeries zero_below(Exp hi) { return LaurentSeries(Window{hi - 1, hi}); }

// Exact equality of everything below hi; both series must be known there.
bool equal_below(const LaurentSeries& a, const LaurentSeries& b, Exp hi) {
  if (a.window().hi < hi || b.window().hi < hi) throw SeriesError("series not known up to hi");
  auto clip = [&](const LaurentSeries& s) {
    std::vector<Term> v;
    for (const auto& t : s.terms())
      if (t.first < hi) v.push_back(t);
    return v;
  };
  return clip(a) == clip(b);
}

void check_kappa(int kappa) {
  if (kappa != 0 && kappa != 1) throw std::invalid_argument("kappa must be 0 or 1");
}

// Terms are drafted without cofactors; each draft names a cofactor key.
// The precision each cofactor needs depends on the lowest exponent of the
// monomial-times-theta it multiplies, so cofactors are computed last.
struct Draft {
  ExpansionTerm term;
  int key;
};

Expansion finish(std::vector<Draft> drafts, int denominator, Exp hi,
                 const std::function<LaurentSeries(int key, Exp hi)>& cofactor) {
  std::map<int, Exp> need;
  for (const auto& d : drafts) {
    const Exp low = d.term.q_exponent + theta_min_exponent(d.term.theta.x, d.term.theta.y);
    auto [it, fresh] = need.emplace(d.key, hi - low);
    if (!fresh) it->second = std::max(it->second, hi - low);
  }
  std::map<int, LaurentSeries> got;
  for (auto [key, h] : need) got.emplace(key, cofactor(key, h));
  Expansion e;
  e.denominator = denominator;
  for (auto& d : drafts) {
    d.term.cofactor = got.at(d.key);
    e.terms.push_back(std::move(d.term));
  }
  return e;
}

// Sum of squared successive differences with n_0 = 0.
Exp square_sum(const IndexTuple& t) {
  Exp s = 0, prev = 0;
  for (int n : t) {
    s += static_cast<Exp>(n - prev) * (n - prev);
    prev = n;
  }
  return s;
}

// i(i+1)/2 + sgn((i+1) n_{i-1} - i n_i), 1-based i, n_0 = 0
Exp c_plus(const IndexTuple& t, int i) {
  const Exp prev = i >= 2 ? t[i - 2] : 0;
  return static_cast<Exp>(i) * (i + 1) / 2 + ((i + 1) * prev - static_cast<Exp>(i) * t[i - 1]);
}
Exp c_minus(const IndexTuple& t, int i) {
  const Exp prev = i >= 2 ? t[i - 2] : 0;
  return static_cast<Exp>(i) * (i + 1) / 2 - ((i + 1) * prev - static_cast<Exp>(i) * t[i - 1]);
}

std::mutex cache_mu;
std::map<std::tuple<int, int, Exp>, LaurentSeries> m_cache;
std::map<std::tuple<int, int, int, Exp, Exp>, LaurentSeries> n_cache;

template <class Key>
std::optional<LaurentSeries> cache_get(std::map<Key, LaurentSeries>& c, const Key& k, Exp hi) {
  std::lock_guard lock(cache_mu);
  auto it = c.find(k);
  if (it == c.end() || it->second.window().hi < hi) return std::nullopt;
  return it->second.truncate(hi);
}

template <class Key>
void cache_put(std::map<Key, LaurentSeries>& c, const Key& k, const LaurentSeries& s) {
  std::lock_guard lock(cache_mu);
  auto it = c.find(k);
  if (it == c.end())
    c.emplace(k, s);
  else if (it->second.window().hi < s.window().hi)
    it->second = s;
}

}  // namespace

LaurentSeries theta_monomial_product(int sign, Exp qexp, const std::vector<ThetaSpec>& thetas,
                                     Exp hi, const mpz_class& weight) {
  Exp V = 0;
  std::vector<Exp> v;
  for (const auto& t : thetas) {
    v.push_back(theta_min_exponent(t.x, t.y));
    V += v.back();
  }
  if (qexp + V >= hi || weight == 0) return zero_below(hi);
  const Exp H = hi - qexp;
  LaurentSeries acc = one(Window{0, H - V});
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    auto f = theta_sum(thetas[i], Window{v[i], H - (V - v[i])});
    acc = mul(acc, f);
  }
  mpz_class c = weight;
  if (parity(sign)) c = -c;
  return scale(shift(acc, qexp), c).truncate(hi);
}

bool in_index_set(const IndexTuple& t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] < 0 || t[i] > static_cast<int>(i) + 1) return false;
  return true;
}

std::vector<IndexTuple> index_set(int m) {
  if (m < 0) throw std::invalid_argument("negative length");
  std::vector<IndexTuple> out{IndexTuple{}};
  for (int i = 1; i <= m; ++i) {
    std::vector<IndexTuple> next;
    for (const auto& t : out)
      for (int n = 0; n <= i; ++n) {
        auto u = t;
        u.push_back(n);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

IndexTuple tau(const IndexTuple& t) {
  if (!in_index_set(t)) throw std::invalid_argument("tuple not in I_m");
  IndexTuple r(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = t[i] == 0 ? 0 : static_cast<int>(i) + 2 - t[i];
  return r;
}

LaurentSeries sigma(const IndexTuple& t, Exp A, Window w) {
  if (!in_index_set(t) || t.empty()) throw std::invalid_argument("tuple not in I_m");
  if (A < 1) throw std::invalid_argument("A must be positive");
  const Exp twice = square_sum(t) - t.back();
  if (twice % 2 != 0) throw std::logic_error("sigma exponent not integral");
  std::vector<ThetaSpec> th;
  for (int i = 1; i <= static_cast<int>(t.size()); ++i)
    th.push_back({0, A * c_plus(t, i), A * c_minus(t, i)});
  auto s = theta_monomial_product(0, A * twice / 2, th, w.hi);
  return s.window().lo > w.lo ? s.with_lo(w.lo) : s;
}

LaurentSeries cofactor_M(int m, int s, Exp A, Exp hi) {
  if (m < 1 || s < 0 || s > m - 1) throw std::invalid_argument("need 0 <= s < m");
  if (A < 1) throw std::invalid_argument("A must be positive");
  if (m == 1) return hi > 0 ? one(Window{0, hi}) : zero_below(hi);
  const auto key = std::make_tuple(m, s, A);
  if (auto c = cache_get(m_cache, key, hi)) return *c;
  LaurentSeries acc = zero_below(hi);
  for (auto t : index_set(m - 2)) {
    t.push_back(s);
    acc = add(acc, sigma(t, A, Window{hi - 1, hi}));
  }
  cache_put(m_cache, key, acc);
  return acc;
}

LaurentSeries cofactor_N(int m1, int m2, int s, Exp Aprime, Exp A, Exp hi) {
  const int m = m1 + m2;
  if (m1 < 1 || m2 < 1 || s < 0 || s > m - 1) throw std::invalid_argument("bad N index");
  if (A < 1) throw std::invalid_argument("A must be positive");
  const auto key = std::make_tuple(m1, m2, s, Aprime, A);
  if (auto c = cache_get(n_cache, key, hi)) return *c;
  const Exp D = 2 * Aprime - A;
  LaurentSeries acc = zero_below(hi);
  for (auto t : index_set(m - 2)) {
    t.push_back(s);  // t = (n_1, ..., n_{m-1})
    const Exp twice = A * square_sum(t) + D * (2 * static_cast<Exp>(t[m1 - 1]) - s);
    if (twice % 2 != 0) throw std::logic_error("N exponent not integral");
    std::vector<ThetaSpec> th;
    th.push_back({0, A * t[0] + 2 * Aprime, 2 * A - A * t[0] - 2 * Aprime});
    for (int i = 2; i <= m - 1; ++i) {
      const Exp off = i <= m1 ? -D : m1 * D;
      th.push_back({0, A * c_plus(t, i) + off, A * c_minus(t, i) - off});
    }
    acc = add(acc, theta_monomial_product(0, twice / 2, th, hi));
  }
  cache_put(n_cache, key, acc);
  return acc;
}

LaurentSeries evaluate(const Expansion& e, Window w) {
  LaurentSeries acc(w);
  for (const auto& t : e.terms) {
    const auto vc = t.cofactor.valuation();
    if (!vc) continue;
    const Exp vt = theta_min_exponent(t.theta.x, t.theta.y);
    if (t.cofactor.window().hi < w.hi - t.q_exponent - vt)
      throw SeriesError("cofactor not known to the required order");
    auto th = theta_monomial_product(t.sign_exponent, t.q_exponent, {t.theta}, w.hi - *vc, t.weight);
    auto p = mul(th, t.cofactor);
    acc = add(acc, p.truncate(w.hi));
  }
  return acc;
}

Expansion power_expansion(int kappa, Exp k, Exp A, Exp Aprime, int m, Window w) {
  check_kappa(kappa);
  if (m < 1 || A < 1) throw std::invalid_argument("need m >= 1 and A >= 1");
  std::vector<Draft> d;
  for (int s = 0; s < m; ++s) {
    ExpansionTerm t;
    t.sign_exponent = parity(static_cast<Exp>(kappa) * s);
    t.q_exponent = k * s + Aprime * s;
    t.theta = spec(kappa * m, k * m + A * s + Aprime * m, -k * m - A * s + (A - Aprime) * m);
    d.push_back({t, s});
  }
  return finish(std::move(d), 1, w.hi, [&](int s, Exp h) { return cofactor_M(m, s, A, h); });
}

Expansion pair_expansion(int kappa, Exp k, Exp A, Exp Aprime, int m, Window w) {
  check_kappa(kappa);
  if (m < 1 || A < 1) throw std::invalid_argument("need m >= 1 and A >= 1");
  std::vector<Draft> d;
  ExpansionTerm p0;
  p0.theta = spec(kappa * m, k * m + Aprime * m, -k * m + (A - Aprime) * m);
  p0.weight = 2;
  d.push_back({p0, 0});
  for (int s = 1; s < m; ++s) {
    ExpansionTerm a, b;
    a.sign_exponent = parity(static_cast<Exp>(kappa) * s);
    a.q_exponent = (k + Aprime) * s;
    a.theta = spec(kappa * m, k * m + A * s + Aprime * m, -k * m - A * s + (A - Aprime) * m);
    b.sign_exponent = parity(static_cast<Exp>(kappa) * (m - s));
    b.q_exponent = (k + Aprime) * (m - s);
    b.theta = spec(kappa * m, k * m - A * s + (A + Aprime) * m, -k * m + A * s - Aprime * m);
    d.push_back({a, s});
    d.push_back({b, s});
  }
  return finish(std::move(d), 2, w.hi, [&](int s, Exp h) { return cofactor_M(m, s, A, h); });
}

Expansion pair_expansion_symmetric(int kappa, Exp k, Exp Aprime, int m, Window w) {
  check_kappa(kappa);
  if (m < 1 || Aprime < 1) throw std::invalid_argument("need m >= 1 and A' >= 1");
  const Exp A = 2 * Aprime;
  std::vector<Draft> d;
  ExpansionTerm p0;
  p0.theta = spec(kappa * m, k * m + Aprime * m, -k * m + Aprime * m);
  p0.weight = 4;
  d.push_back({p0, 0});
  for (int s = 1; s < m; ++s) {
    const Exp K = kappa;
    auto add_term = [&](Exp sg, Exp qe, Exp x, Exp y) {
      ExpansionTerm t;
      t.sign_exponent = parity(sg);
      t.q_exponent = qe;
      t.theta = spec(kappa * m, x, y);
      d.push_back({t, s});
    };
    add_term(K * s, (k + Aprime) * s, k * m + Aprime * (m + 2 * s), -k * m + Aprime * (m - 2 * s));
    add_term(K * s, (-k + Aprime) * s, k * m + Aprime * (m - 2 * s), -k * m + Aprime * (m + 2 * s));
    add_term(K * (m - s), (k + Aprime) * (m - s), k * m + Aprime * (3 * m - 2 * s),
             -k * m + Aprime * (-m + 2 * s));
    add_term(K * (m - s), (-k + Aprime) * (m - s), k * m + Aprime * (-m + 2 * s),
             -k * m + Aprime * (3 * m - 2 * s));
  }
  return finish(std::move(d), 4, w.hi, [&](int s, Exp h) { return cofactor_M(m, s, A, h); });
}

Expansion two_power_expansion(int kappa, Exp k, Exp A, Exp Aprime, int m1, int m2, Window w) {
  check_kappa(kappa);
  if (m1 < 1 || m2 < 1 || A < 1) throw std::invalid_argument("need m1, m2 >= 1 and A >= 1");
  const int m = m1 + m2;
  std::vector<Draft> d;
  for (int s = 0; s < m; ++s) {
    ExpansionTerm t;
    t.sign_exponent = parity(static_cast<Exp>(kappa) * s);
    t.q_exponent = k * s;
    t.theta = spec(kappa * m, k * m + A * s + A * m2 + Aprime * (m1 - m2),
                   -k * m - A * s + A * m1 - Aprime * (m1 - m2));
    d.push_back({t, s});
  }
  return finish(std::move(d), 1, w.hi,
                [&](int s, Exp h) { return cofactor_N(m1, m2, s, Aprime, A, h); });
}

Expansion quotient_expansion(int kappa, Exp k, Exp mu, int m, Window w) {
  check_kappa(kappa);
  if (m < 1 || mu < 1) throw std::invalid_argument("need m >= 1 and mu >= 1");
  if (!(0 < 2 * k && 2 * k < mu)) throw std::invalid_argument("need 0 < 2k < mu");
  const Exp K = kappa, km = k * m;
  // keys: s for M_s(q^{3mu}); m + m1 * m + s for N_s^{(m1, m-m1)}(q^mu, q^{3mu})
  std::vector<Draft> d;
  auto add_term = [&](int key, const mpz_class& wt, Exp sg, Exp qe, Exp x, Exp y) {
    ExpansionTerm t;
    t.sign_exponent = parity(sg);
    t.q_exponent = qe;
    t.theta = spec(K * m, x, y);
    t.weight = wt;
    d.push_back({t, key});
  };
  add_term(0, 2, 0, 0, 3 * km + mu * m, -3 * km + 2 * mu * m);
  add_term(0, 2, (K + 1) * m, km, 3 * km + 2 * mu * m, -3 * km + mu * m);
  for (int s = 1; s < m; ++s) {
    add_term(s, 1, K * s, (3 * k + mu) * s, 3 * km + mu * (m + 3 * s), -3 * km + mu * (2 * m - 3 * s));
    add_term(s, 1, (K + 1) * m + K * s, km + (-3 * k + mu) * s, 3 * km + mu * (2 * m - 3 * s),
             -3 * km + mu * (m + 3 * s));
    add_term(s, 1, (K + 1) * m + K * (m - s), km + (-3 * k + mu) * (m - s),
             3 * km + mu * (-m + 3 * s), -3 * km + mu * (4 * m - 3 * s));
    add_term(s, 1, K * (m - s), (3 * k + mu) * (m - s), 3 * km + mu * (4 * m - 3 * s),
             -3 * km + mu * (-m + 3 * s));
  }
  for (int m1 = 1; m1 < m; ++m1) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), m, m1);
    for (int s = 0; s < m; ++s) {
      const int key = m + m1 * m + s;
      add_term(key, binom, (K + 1) * (m - m1) + K * s, k * (m - m1) + 3 * k * s,
               3 * km + mu * (2 * m - m1 + 3 * s), -3 * km + mu * (m + m1 - 3 * s));
      add_term(key, binom, (K + 1) * m1 + K * s, k * m1 - 3 * k * s, 3 * km + mu * (m + m1 - 3 * s),
               -3 * km + mu * (2 * m - m1 + 3 * s));
    }
  }
  return finish(std::move(d), 2, w.hi, [&](int key, Exp h) {
    if (key < m) return cofactor_M(m, key, 3 * mu, h);
    const int m1 = (key - m) / m, s = (key - m) % m;
    return cofactor_N(m1, m - m1, s, mu, 3 * mu, h);
  });
}

LaurentSeries quotient_power(int kappa, Exp k, Exp mu, int m, Window w) {
  check_kappa(kappa);
  if (m < 0) throw std::invalid_argument("negative power");
  if (k == 0 || mu < 1) throw std::invalid_argument("need k != 0 and mu >= 1");
  const Exp vn = theta_min_exponent(2 * k, mu - 2 * k), vd = theta_min_exponent(k, mu - k);
  const Exp vq = vn - vd;
  // precision each stage needs so that the m-th power is exact below w.hi
  const Exp h = w.hi - static_cast<Exp>(std::max(m - 1, 0)) * vq;
  auto num = theta_monomial_product(0, 0, {{1, 2 * k, mu - 2 * k}}, h + vd);
  auto den = theta_monomial_product(0, 0, {{kappa, k, mu - k}}, h + 2 * vd - vn);
  auto q = div(num, den);
  if (m == 0) return one(Window{std::min<Exp>(0, w.hi - 1), w.hi});
  return pow(q, static_cast<unsigned>(m)).truncate(w.hi);
}

bool quintuple_check(int kappa, Exp k, Exp mu, Window w) {
  check_kappa(kappa);
  if (!(0 < 2 * k && 2 * k < mu)) throw std::invalid_argument("need 0 < 2k < mu");
  const Exp hi = std::max<Exp>(w.hi, 1);
  auto lhs = mul(quotient_power(kappa, k, mu, 1, {0, hi}), theta_sum({1, mu, 2 * mu}, {0, hi}))
                 .truncate(hi);
  auto rhs = add(theta_monomial_product(0, 0, {spec(kappa, 3 * k + mu, -3 * k + 2 * mu)}, hi),
                 theta_monomial_product(kappa + 1, k, {spec(kappa, 3 * k + 2 * mu, -3 * k + mu)}, hi));
  return equal_below(lhs, rhs, hi);
}

bool schroter_check(Exp A, Exp B, Exp x_exp, Exp y_exp, Window w) {
  if (A < 1 || B < 1) throw std::invalid_argument("need A, B >= 1");
  auto lhs = theta_monomial_product(0, 0, {{0, A + x_exp, A - x_exp}, {0, B + y_exp, B - y_exp}}, w.hi);
  LaurentSeries rhs = zero_below(w.hi);
  for (Exp n = 0; n < A + B; ++n) {
    const Exp xy = x_exp - y_exp, lin = B * x_exp + A * y_exp;
    rhs = add(rhs, theta_monomial_product(
                       0, A * n * n + n * x_exp,
                       {{0, A + B + 2 * A * n + xy, A + B - 2 * A * n - xy},
                        {0, A * B * (A + B + 2 * n) + lin, A * B * (A + B - 2 * n) - lin}},
                       w.hi));
  }
  return equal_below(lhs, rhs, w.hi);
}

bool symmetry_Ms(int m, int s, Exp A, Window w) {
  if (s < 1 || s > m - 1) throw std::invalid_argument("need 1 <= s <= m-1");
  return equal_below(cofactor_M(m, s, A, w.hi), cofactor_M(m, m - s, A, w.hi), w.hi);
}

bool only_quotient_power_check(int mprime, Exp mu, int kappa, Exp k, Window w) {
  if (mprime < 0 || mu < 1) throw std::invalid_argument("need m' >= 0 and mu >= 1");
  const Exp M = 3 * (2 * static_cast<Exp>(mprime) + 1);
  if (gcd(Int(k), Int(M)) != 1) throw std::invalid_argument("need gcd(k, M) = 1");
  const Exp shift_by = -2 * (2 * static_cast<Exp>(mprime) + 1) * k;
  auto g = shift(quotient_power(kappa, k, M * mu, 2 * mprime + 1, {0, w.hi - shift_by}), shift_by);
  return huff(g, M).is_zero();
}

bool vanishing_pair_check(Exp M, Exp mu, Exp k, int kappa, Window w) {
  check_kappa(kappa);
  if (M < 1 || mu < 1) throw std::invalid_argument("need M, mu >= 1");
  auto a = theta_monomial_product(0, 0, {spec(kappa, M * k + M * M * mu, -M * k)}, w.hi);
  auto b = theta_monomial_product(kappa + 1, -M * k, {spec(kappa, M * k, -M * k + M * M * mu)}, w.hi);
  return add(a, b).is_zero();
}

}  // namespace thetavanish

#include "thetavanish/verify.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "thetavanish/expand.hpp"
#include "thetavanish/numtheory.hpp"
#include "thetavanish/theta.hpp"

namespace thetavanish {

namespace {

struct PoweredTheta {
  ThetaSpec theta;
  int power;
};

// M, sigma and the factors of the displayed product (quotients as negative
// powers).
struct Shape {
  Exp M = 1;
  Exp sigma = 0;
  std::vector<PoweredTheta> factors;
};

Shape shape_of(const FamilySpec& s) {
  const Exp l = s.ell, m = s.m, k = s.k, mu = s.mu;
  Shape sh;
  auto quotient = [&](int p) {
    const Exp r = mu * sh.M;
    sh.factors.push_back({{1, 2 * k, r - 2 * k}, p});
    sh.factors.push_back({{s.lambda, k, r - k}, -p});
  };
  switch (s.family) {
    case Family::I_1:
      sh.M = 2 * l + 6 * m + 3;
      sh.sigma = -(2 * l + 4 * m + 2) * k;
      sh.factors.push_back({{s.kappa, k, mu * sh.M - k}, static_cast<int>(2 * l)});
      quotient(static_cast<int>(2 * m + 1));
      break;
    case Family::I_2:
      sh.M = 8 * l + 6 * m + 3;
      sh.sigma = -(6 * l + 4 * m + 2) * k;
      sh.factors.push_back({{s.kappa, 2 * k, mu * sh.M - 2 * k}, static_cast<int>(2 * l)});
      quotient(static_cast<int>(2 * m + 1));
      break;
    case Family::I_3:
      sh.M = 4 * l + 6 * m + 5;
      sh.sigma = -(2 * l + 2 * m + 2) * k;
      sh.factors.push_back({{s.kappa, 2 * k, mu * sh.M - 2 * k}, static_cast<int>(2 * l + 1)});
      quotient(static_cast<int>(4 * m + 2));
      break;
    case Family::Experimental:
      sh.M = 4 * l + 6 * m + 8;
      sh.sigma = -(2 * l + 2 * m + 3) * k;
      sh.factors.push_back({{s.kappa, 2 * k, mu * sh.M - 2 * k}, static_cast<int>(2 * l + 1)});
      quotient(static_cast<int>(4 * m + 4));
      break;
    case Family::I2_1:
      sh.M = 4 * l + 2 * m + 3;
      sh.sigma = -(3 * l + m + 2) * k;
      sh.factors.push_back({{s.kappa, k, mu * sh.M - k}, static_cast<int>(2 * l + 1)});
      sh.factors.push_back({{s.lambda, mu * sh.M + k, mu * sh.M - k}, static_cast<int>(2 * m + 1)});
      break;
    case Family::I2_2:
      sh.M = 2 * l + 4 * m + 3;
      sh.sigma = -(2 * l + 2 * m + 2) * k;
      sh.factors.push_back({{s.kappa, k, mu * sh.M - k}, static_cast<int>(2 * l + 1)});
      sh.factors.push_back({{s.lambda, mu * sh.M + 2 * k, mu * sh.M - 2 * k}, static_cast<int>(2 * m + 1)});
      break;
    case Family::I3_1:
      sh.M = 4 * l + 2 * m + 3;
      sh.sigma = -(l + m + 1) * k;
      sh.factors.push_back({{s.kappa, k, mu * sh.M - k}, static_cast<int>(2 * l + 1)});
      sh.factors.push_back({{s.lambda, k, 2 * mu * sh.M - k}, static_cast<int>(2 * m + 1)});
      break;
    case Family::I3_2:
      sh.M = 2 * l + 16 * m + 9;
      sh.sigma = -(2 * l + 12 * m + 7) * k;
      sh.factors.push_back({{s.kappa, k, mu * sh.M - k}, static_cast<int>(2 * l + 1)});
      sh.factors.push_back({{s.lambda, 4 * k, 2 * mu * sh.M - 4 * k}, static_cast<int>(2 * m + 1)});
      break;
    case Family::I3_3:
      sh.M = 16 * l + 2 * m + 9;
      sh.sigma = -(10 * l + 2 * m + 6) * k;
      sh.factors.push_back({{s.kappa, 2 * k, mu * sh.M - 2 * k}, static_cast<int>(2 * l + 1)});
      sh.factors.push_back({{s.lambda, k, 2 * mu * sh.M - k}, static_cast<int>(2 * m + 1)});
      break;
    case Family::II_1: {
      sh.M = 2 * l + 4 * m + 3;
      sh.sigma = 2 * (2 * m + 1) * (2 * m + 1) * k;
      const Exp a = (2 * m + 1) * k, b = (2 * l + 1) * k;
      sh.factors.push_back({{s.kappa, a, mu * sh.M - a}, static_cast<int>(2 * l + 1)});
      sh.factors.push_back({{s.lambda, b, 2 * mu * sh.M - b}, static_cast<int>(2 * m + 1)});
      break;
    }
    case Family::II_2: {
      sh.M = 2 * l + 4 * m + 5;
      sh.sigma = 2 * (2 * m + 2) * (2 * m + 2) * k;
      const Exp a = (2 * m + 2) * k, b = (2 * l + 1) * k;
      sh.factors.push_back({{s.kappa, a, mu * sh.M - a}, static_cast<int>(2 * l + 1)});
      sh.factors.push_back({{s.lambda, b, 2 * mu * sh.M - b}, static_cast<int>(2 * m + 2)});
      break;
    }
    case Family::II_3: {
      sh.M = 4 * l + 2 * m + 5;
      sh.sigma = 3 * (2 * l + 2) * (2 * l + 2) * k;
      const Exp a = (2 * m + 1) * k, b = (4 * l + 4) * k;
      sh.factors.push_back({{s.kappa, a, mu * sh.M - a}, static_cast<int>(2 * l + 2)});
      sh.factors.push_back({{s.lambda, b, 2 * mu * sh.M - b}, static_cast<int>(2 * m + 1)});
      break;
    }
  }
  return sh;
}

const std::vector<std::pair<Family, const char*>>& names() {
  static const std::vector<std::pair<Family, const char*>> n{
      {Family::I_1, "I-1"},   {Family::I_2, "I-2"},   {Family::I_3, "I-3"},   {Family::I2_1, "I.2-1"},
      {Family::I2_2, "I.2-2"}, {Family::I3_1, "I.3-1"}, {Family::I3_2, "I.3-2"}, {Family::I3_3, "I.3-3"},
      {Family::II_1, "II-1"}, {Family::II_2, "II-2"}, {Family::II_3, "II-3"},
      {Family::Experimental, "I-3-4m+4"}};
  return n;
}

nlohmann::json window_json(const Window& w) { return {{"lo", w.lo}, {"hi", w.hi}}; }

nlohmann::json witness_json(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  return {{"exponent", w->exponent}, {"coeff", int_to_json(w->coeff)}};
}

}  // namespace

std::string to_string(Family f) {
  for (const auto& [id, n] : names())
    if (id == f) return n;
  return "?";
}

std::optional<Family> family_from_name(const std::string& s) {
  for (const auto& [id, n] : names())
    if (s == n) return id;
  return std::nullopt;
}

std::vector<Family> all_families() {
  return {Family::I_1,  Family::I_2,  Family::I_3,  Family::I2_1, Family::I2_2, Family::I3_1,
          Family::I3_2, Family::I3_3, Family::II_1, Family::II_2, Family::II_3};
}

FamilyType family_type(Family f) {
  switch (f) {
    case Family::I_1:
    case Family::I_2:
    case Family::I_3: return FamilyType::I;
    case Family::I2_1:
    case Family::I2_2: return FamilyType::I2;
    case Family::I3_1:
    case Family::I3_2:
    case Family::I3_3: return FamilyType::I3;
    case Family::II_1:
    case Family::II_2:
    case Family::II_3: return FamilyType::II;
    case Family::Experimental: return FamilyType::Experimental;
  }
  return FamilyType::I;
}

ModulusShift family_M_sigma(const FamilySpec& s) {
  if (s.ell < 0 || s.m < 0) throw std::invalid_argument("need ell, m >= 0");
  const Shape sh = shape_of(s);
  return {sh.M, sh.sigma};
}

std::vector<std::pair<int, int>> admissible_kappa_lambda(Family f) {
  switch (f) {
    case Family::I_1:
    case Family::I_2: return {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    case Family::I_3:
    case Family::Experimental: return {{1, 0}, {1, 1}};
    case Family::I2_1:
    case Family::I3_1:
    case Family::II_1: return {{0, 1}, {1, 0}};
    case Family::I2_2:
    case Family::I3_2:
    case Family::II_3: return {{0, 1}, {1, 1}};
    case Family::I3_3:
    case Family::II_2: return {{1, 0}, {1, 1}};
  }
  return {};
}

bool coprimality_holds(Family f, int ell, int m) {
  switch (f) {
    case Family::II_1: return std::gcd(2 * ell + 1, 2 * m + 1) == 1;
    case Family::II_2: return std::gcd(2 * ell + 1, 2 * m + 2) == 1;
    case Family::II_3: return std::gcd(2 * ell + 2, 2 * m + 1) == 1;
    default: return true;
  }
}

bool exponents_positive(const FamilySpec& s) {
  if (s.k < 1) return false;
  const Shape sh = shape_of(s);
  for (const auto& f : sh.factors)
    if (f.theta.x < 1 || f.theta.y < 1) return false;
  return true;
}

void check_spec(const FamilySpec& s) {
  if (s.ell < 0 || s.m < 0) throw std::invalid_argument("need ell, m >= 0");
  if (s.mu < 1) throw std::invalid_argument("need mu >= 1");
  const auto adm = admissible_kappa_lambda(s.family);
  if (std::find(adm.begin(), adm.end(), std::make_pair(s.kappa, s.lambda)) == adm.end())
    throw std::invalid_argument("(kappa, lambda) not admissible for " + to_string(s.family));
  if (!coprimality_holds(s.family, s.ell, s.m))
    throw std::invalid_argument("coprimality side condition fails for " + to_string(s.family));
  const Exp M = shape_of(s).M;
  if (std::gcd(s.k, M) != 1) throw std::invalid_argument("need gcd(k, M) = 1");
  if (!exponents_positive(s)) throw std::invalid_argument("some theta exponent is < 1");
}

std::vector<Exp> k_range(Family f, int ell, int m, Exp mu) {
  FamilySpec s{f, ell, m, mu, 1, 0, 0, 0};
  const Exp M = shape_of(s).M;
  std::vector<Exp> out;
  // every family has a factor with exponent (mu M - c k), c >= 1
  for (Exp k = 1; k < 2 * mu * M; ++k) {
    s.k = k;
    if (std::gcd(k, M) == 1 && exponents_positive(s)) out.push_back(k);
  }
  return out;
}

Window default_window(const FamilySpec& s, Exp min_count) {
  const auto [M, sigma0] = family_M_sigma(s);
  const Exp sigma = sigma0 + s.sigma_shift;
  const Exp lo = std::min<Exp>(0, sigma) - 1;
  const Exp start = std::max(lo, sigma);
  const Exp first = floor_div(Int(start) + M - 1, Int(M)).get_si() * M;
  return {lo, first + (min_count - 1) * M + 1};
}

LaurentSeries build_family_series(const FamilySpec& s, Window w) {
  if (!exponents_positive(s)) throw std::invalid_argument("some theta exponent is < 1");
  const Shape sh = shape_of(s);
  const Exp sigma = sh.sigma + s.sigma_shift;
  const Exp H = w.hi - sigma;
  if (H <= 0) return LaurentSeries(w);
  // merge equal Pochhammer factors; the q^(x+y) factors of a quotient cancel
  std::map<std::tuple<int, Exp, Exp>, int> acc;
  for (const auto& f : sh.factors) {
    if (f.power == 0) continue;
    const int sg = f.theta.kappa ? 1 : -1;
    const Exp r = f.theta.x + f.theta.y;
    acc[{sg, f.theta.x, r}] += f.power;
    acc[{sg, f.theta.y, r}] += f.power;
    acc[{1, r, r}] += f.power;
  }
  std::vector<PochFactor> pf;
  for (const auto& [key, p] : acc)
    if (p != 0) pf.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), p});
  auto g = shift(poch_product(pf, {0, H}), sigma);
  return g.window().lo > w.lo ? g.with_lo(w.lo) : g;
}

LaurentSeries build_family_series_direct(const FamilySpec& s, Window w) {
  if (!exponents_positive(s)) throw std::invalid_argument("some theta exponent is < 1");
  const Shape sh = shape_of(s);
  const Exp sigma = sh.sigma + s.sigma_shift;
  const Exp H = w.hi - sigma;
  if (H <= 0) return LaurentSeries(w);
  const Window v{0, H};
  LaurentSeries num = one(v), den = one(v);
  for (const auto& f : sh.factors) {
    if (f.power == 0) continue;
    auto t = pow(theta_sum(f.theta, v), static_cast<unsigned>(std::abs(f.power)));
    if (f.power > 0)
      num = mul(num, t);
    else
      den = mul(den, t);
  }
  auto g = shift(div(num, den).truncate(H), sigma);
  return g.window().lo > w.lo ? g.with_lo(w.lo) : g;
}

// ---------------------------------------------------------------------------
// pairing traces

namespace {

// One theta factor of H together with its monomial contribution to w.
struct Side {
  Int u, A, Ap;
  int kappa;
  Int wadd;
};

CriterionInput combine(const Exp M, const Exp sigma, const Side& a, const Side& b) {
  CriterionInput in;
  in.M = M;
  in.A = a.A;
  in.Aprime = a.Ap;
  in.u = a.u;
  in.kappa = a.kappa;
  in.B = b.A;
  in.Bprime = b.Ap;
  in.v = b.u;
  in.lambda = b.kappa;
  in.w = Int(sigma) + a.wadd + b.wadd;
  return in;
}

bool huff_zero(const CriterionInput& in, Window w) { return huff(build_H(in, w), to_i64(in.M)).is_zero(); }

TraceEntry zero_entry(std::string rel, int xi, int tau, const CriterionInput& in, Window w) {
  TraceEntry e;
  e.relation = std::move(rel);
  e.xi = xi;
  e.tau = tau;
  e.input = in;
  if (auto j = check_zero_by_J(in)) {
    e.branch = "zero_by_J";
    e.J = j;
    e.certified = true;
  } else {
    const auto h = huff_analyze(in);
    if (h.kind == HuffAnalysis::Kind::Zero) {
      e.branch = "zero";
      e.certified = true;
    } else {
      e.branch = "inconclusive";
      e.reason = h.kind == HuffAnalysis::Kind::AssumptionFailed ? h.reason : "closed form is not zero";
    }
  }
  e.oracle_holds = huff_zero(in, w);
  return e;
}

TraceEntry pair_entry(std::string rel, int xi, int tau, const CriterionInput& in,
                      const CriterionInput& expected, int parity, bool check_variant, Window w) {
  TraceEntry e;
  e.relation = std::move(rel);
  e.xi = xi;
  e.tau = tau;
  e.input = in;
  e.partner = expected;
  e.required_parity = parity & 1;
  try {
    const auto out = check_variant ? pair_cancel_check(in) : pair_cancel_hat(in);
    if (!out.partner || !(*out.partner == expected)) {
      e.branch = "inconclusive";
      e.reason = "criterion pairs with a different partner";
    } else if (out.kind == CancelOutcome::Kind::BothZero) {
      e.branch = "both_zero";
      e.reason = out.reason;
      e.certified = true;
    } else if (out.kind == CancelOutcome::Kind::Pair) {
      e.branch = "pair";
      e.certified = out.epsilon == e.required_parity;
      if (!e.certified) e.reason = "sign parity differs from the required one";
    } else {
      e.branch = "inconclusive";
      e.reason = out.reason;
    }
  } catch (const std::invalid_argument& ex) {
    e.branch = "inconclusive";
    e.reason = ex.what();
  }
  auto h1 = huff(build_H(in, w), to_i64(in.M));
  auto h2 = huff(build_H(expected, w), to_i64(in.M));
  if (e.required_parity) h2 = neg(h2);
  e.oracle_holds = h1.terms() == h2.terms();
  return e;
}

struct Params {
  Exp a = 1, L = 1, b = 1, mB = 1;  // A-side multiplier and power, B-side multiplier and power
};

Params params_of(const FamilySpec& s) {
  const Exp l = s.ell, m = s.m;
  switch (s.family) {
    case Family::I_1: return {1, 2 * l, 0, 2 * m + 1};
    case Family::I_2: return {2, 2 * l, 0, 2 * m + 1};
    case Family::I_3: return {2, 2 * l + 1, 0, 4 * m + 2};
    case Family::Experimental: return {2, 2 * l + 1, 0, 4 * m + 4};
    case Family::I2_1: return {1, 2 * l + 1, 1, 2 * m + 1};
    case Family::I2_2: return {1, 2 * l + 1, 2, 2 * m + 1};
    case Family::I3_1: return {1, 2 * l + 1, 1, 2 * m + 1};
    case Family::I3_2: return {1, 2 * l + 1, 4, 2 * m + 1};
    case Family::I3_3: return {2, 2 * l + 1, 1, 2 * m + 1};
    case Family::II_1: return {2 * m + 1, 2 * l + 1, 2 * l + 1, 2 * m + 1};
    case Family::II_2: return {2 * m + 2, 2 * l + 1, 2 * l + 1, 2 * m + 2};
    case Family::II_3: return {2 * m + 1, 2 * l + 2, 4 * l + 4, 2 * m + 1};
  }
  return {};
}

void tally(StrategyTrace& t) {
  t.certified = t.inconclusive = t.contradictions = 0;
  for (const auto& e : t.entries) {
    if (e.certified)
      ++t.certified;
    else
      ++t.inconclusive;
    if (e.certified && !e.oracle_holds) ++t.contradictions;
  }
}

}  // namespace

StrategyTrace strategy_trace(const FamilySpec& s, Window w) {
  check_spec(s);
  const FamilyType type = family_type(s.family);
  if (type == FamilyType::II) throw std::invalid_argument("strategy_trace covers Type I, I.2 and I.3 lines");
  StrategyTrace t;
  t.spec = s;
  const auto [M, sigma0] = family_M_sigma(s);
  t.M = M;
  t.sigma = sigma0 + s.sigma_shift;
  t.window = w;
  const Exp sigma = t.sigma, mu = s.mu, k = s.k;
  const Params p = params_of(s);
  const Exp L = p.L, a = p.a;
  const int kL = static_cast<int>((s.kappa * L) % 2);

  // A-side: A_0, A_I(xi), A_II(xi)
  const Side A0{a * k * L, L * mu, 0, kL, 0};
  auto AI = [&](Exp xi) { return Side{a * k * L, L * mu, xi * mu, kL, a * xi * k}; };
  auto AII = [&](Exp xi) { return Side{a * k * L, L * mu, (L - xi) * mu, kL, a * (L - xi) * k}; };

  if (type == FamilyType::I || type == FamilyType::Experimental) {
    const Exp mq = p.mB;
    if (L == 0) {
      // Only the quotient power is left; that case vanishes outright when
      // M = 3 mq and sigma = -2 mq k.
      TraceEntry e;
      e.relation = "quotient-only";
      e.branch = "quotient-only";
      e.certified = M == 3 * mq && sigma == -2 * mq * k;
      if (!e.certified) {
        e.branch = "inconclusive";
        e.reason = "needs M = 3 mq and sigma = -2 mq k";
      }
      e.input.M = M;
      e.input.w = sigma;
      e.oracle_holds = huff(build_family_series(s, w), M).is_zero();
      t.entries.push_back(e);
      tally(t);
      return t;
    }
    const int lm = static_cast<int>((s.lambda * mq) % 2);
    auto BI = [&](Exp tau) { return Side{3 * k * mq, 3 * mq * mu, (mq + tau) * mu, lm, tau * k}; };
    auto BII = [&](Exp tau) { return Side{3 * k * mq, 3 * mq * mu, (2 * mq - tau) * mu, lm, (mq - tau) * k}; };
    std::set<Exp> taus{0};
    for (Exp tt = 1; tt < mq; ++tt) {
      taus.insert(3 * tt);
      taus.insert(3 * tt - 2 * mq);
    }
    for (Exp m1 = 1; m1 < mq; ++m1)
      for (Exp tt = 0; tt < mq; ++tt) taus.insert(mq - m1 + 3 * tt);
    const int par0 = static_cast<int>((1 + (s.lambda + 1) * mq) % 2);
    for (Exp tau : taus)
      t.entries.push_back(pair_entry("A0B", 0, static_cast<int>(tau), combine(M, sigma, A0, BI(tau)),
                                     combine(M, sigma, A0, BII(tau)), par0, false, w));
    std::set<Exp> taus2 = taus;
    for (Exp tau : taus) taus2.insert(mq - tau);
    const int par1 = static_cast<int>((1 + kL + (s.lambda + 1) * mq) % 2);
    for (Exp xi = 1; xi < L; ++xi)
      for (Exp tau : taus2)
        t.entries.push_back(pair_entry("AB", static_cast<int>(xi), static_cast<int>(tau),
                                       combine(M, sigma, AI(xi), BI(tau)),
                                       combine(M, sigma, AII(xi), BII(tau)), par1, true, w));
    tally(t);
    return t;
  }

  const Exp mB = p.mB, b = p.b;
  const int lm = static_cast<int>((s.lambda * mB) % 2);
  const Exp v = b * k * mB, B = 2 * mB * mu;
  Side B0;
  std::function<Side(Exp)> BI, BII;
  std::vector<Exp> ab_taus;
  int parA0B, parAB;
  if (type == FamilyType::I2) {
    B0 = {v, B, mB * mu, lm, 0};
    BI = [=](Exp tau) { return Side{v, B, (mB + 2 * tau) * mu, lm, b * tau * k}; };
    BII = [=](Exp tau) { return Side{v, B, (mB - 2 * tau) * mu, lm, -b * tau * k}; };
    for (Exp tau = 1; tau < mB; ++tau) {
      ab_taus.push_back(tau);
      ab_taus.push_back(-tau);
    }
    parA0B = 1;
    parAB = (1 + kL) % 2;
  } else {
    B0 = {v, B, 0, lm, 0};
    BI = [=](Exp tau) { return Side{v, B, 2 * tau * mu, lm, b * tau * k}; };
    BII = [=](Exp tau) { return Side{v, B, 2 * (mB - tau) * mu, lm, b * (mB - tau) * k}; };
    for (Exp tau = 1; tau < mB; ++tau) ab_taus.push_back(tau);
    parA0B = (1 + lm) % 2;
    parAB = (1 + kL + lm) % 2;
  }
  t.entries.push_back(zero_entry("A0B0", 0, 0, combine(M, sigma, A0, B0), w));
  for (Exp tau = 1; tau < mB; ++tau)
    t.entries.push_back(pair_entry("A0B", 0, static_cast<int>(tau), combine(M, sigma, A0, BI(tau)),
                                   combine(M, sigma, A0, BII(tau)), parA0B, false, w));
  for (Exp xi = 1; xi < L; ++xi)
    t.entries.push_back(pair_entry("AB0", static_cast<int>(xi), 0, combine(M, sigma, B0, AI(xi)),
                                   combine(M, sigma, B0, AII(xi)), (1 + kL) % 2, false, w));
  for (Exp xi = 1; xi < L; ++xi)
    for (Exp tau : ab_taus)
      t.entries.push_back(pair_entry("AB", static_cast<int>(xi), static_cast<int>(tau),
                                     combine(M, sigma, AI(xi), BI(tau)), combine(M, sigma, AII(xi), BII(tau)),
                                     parAB, true, w));
  tally(t);
  return t;
}

StrategyTrace term_certification(const FamilySpec& s, Window w) {
  check_spec(s);
  if (family_type(s.family) != FamilyType::II) throw std::invalid_argument("term certification covers Type II lines");
  StrategyTrace t;
  t.spec = s;
  const auto [M, sigma0] = family_M_sigma(s);
  t.M = M;
  t.sigma = sigma0 + s.sigma_shift;
  t.window = w;
  const Params p = params_of(s);
  const Exp k = s.k, mu = s.mu;
  const int kL = static_cast<int>((s.kappa * p.L) % 2), lm = static_cast<int>((s.lambda * p.mB) % 2);
  for (Exp xi = 0; xi < p.L; ++xi)
    for (Exp tau = 0; tau < p.mB; ++tau) {
      const Side A{p.a * k * p.L, p.L * mu, xi * mu, kL, p.a * xi * k};
      const Side B{p.b * k * p.mB, 2 * p.mB * mu, 2 * tau * mu, lm, p.b * tau * k};
      t.entries.push_back(
          zero_entry("term", static_cast<int>(xi), static_cast<int>(tau), combine(M, t.sigma, A, B), w));
    }
  tally(t);
  return t;
}

// ---------------------------------------------------------------------------
// reports

nlohmann::json to_json(const FamilySpec& s) {
  nlohmann::json j{{"family", to_string(s.family)}, {"ell", s.ell}, {"m", s.m},          {"mu", s.mu},
                   {"k", s.k},                     {"kappa", s.kappa}, {"lambda", s.lambda}};
  if (s.sigma_shift != 0) j["sigma_shift"] = s.sigma_shift;
  if (s.family == Family::Experimental) j["unproven"] = true;
  return j;
}

FamilySpec family_spec_from_json(const nlohmann::json& j) {
  FamilySpec s;
  const auto name = j.at("family").get<std::string>();
  const auto f = family_from_name(name);
  if (!f) throw std::invalid_argument("unknown family id " + name);
  s.family = *f;
  s.ell = j.value("ell", 0);
  s.m = j.value("m", 0);
  s.mu = j.value("mu", Exp{1});
  s.k = j.value("k", Exp{1});
  s.kappa = j.value("kappa", 0);
  s.lambda = j.value("lambda", 0);
  s.sigma_shift = j.value("sigma_shift", Exp{0});
  return s;
}

nlohmann::json to_json(const VerificationReport& r) {
  return {{"kind", r.kind},       {"subject", r.subject},   {"M", r.M},
          {"sigma", r.sigma},     {"window", window_json(r.window)}, {"checked", r.checked},
          {"passed", r.passed},   {"witness", witness_json(r.witness)}, {"method", r.method},
          {"details", r.details}};
}

nlohmann::json to_json(const TraceEntry& e) {
  nlohmann::json j{{"relation", e.relation}, {"xi", e.xi},          {"tau", e.tau},
                   {"branch", e.branch},     {"certified", e.certified}, {"oracle_holds", e.oracle_holds}};
  if (e.relation != "quotient-only") j["input"] = to_json(e.input);
  if (e.partner) {
    j["partner"] = to_json(*e.partner);
    j["required_parity"] = e.required_parity;
  }
  if (e.J) j["J"] = to_json(e.J);
  if (!e.reason.empty()) j["reason"] = e.reason;
  return j;
}

nlohmann::json to_json(const StrategyTrace& t, bool with_entries) {
  nlohmann::json j{{"spec", to_json(t.spec)},   {"M", t.M},
                   {"sigma", t.sigma},          {"window", window_json(t.window)},
                   {"relations", t.entries.size()}, {"certified", t.certified},
                   {"inconclusive", t.inconclusive}, {"contradictions", t.contradictions},
                   {"all_certified", t.all_certified()}};
  std::map<std::string, int> branches;
  for (const auto& e : t.entries) ++branches[e.branch];
  j["branches"] = branches;
  if (with_entries) {
    auto arr = nlohmann::json::array();
    for (const auto& e : t.entries) arr.push_back(to_json(e));
    j["entries"] = arr;
  } else {
    // keep the failures visible even in summaries
    auto arr = nlohmann::json::array();
    for (const auto& e : t.entries)
      if (!e.certified || !e.oracle_holds) arr.push_back(to_json(e));
    if (!arr.empty()) j["unresolved"] = arr;
  }
  return j;
}

VerificationReport verify_family(const FamilySpec& s, Window w, const VerifyOptions& opt) {
  check_spec(s);
  VerificationReport r;
  r.kind = "family";
  r.subject = to_json(s);
  const auto [M, sigma0] = family_M_sigma(s);
  r.M = M;
  r.sigma = sigma0 + s.sigma_shift;
  const auto g = build_family_series(s, w);
  r.window = g.window();
  const auto vr = vanishes_on(g, M, 0);
  r.checked = vr.checked;
  r.passed = vr.vanishes;
  r.witness = vr.witness;
  r.details["build"] = "triple-product form";
  if (s.family == Family::Experimental) r.details["unproven"] = true;
  if (opt.certify) {
    const auto t = family_type(s.family) == FamilyType::II ? term_certification(s, w) : strategy_trace(s, w);
    r.details["certification"] = to_json(t, false);
    if (t.all_certified() && t.contradictions == 0 && r.passed) r.method = "criteria-certified";
    if (t.all_certified() && !r.passed) r.details["certificate_contradicts_series"] = true;
  }
  return r;
}

VerificationReport verify_family(const FamilySpec& s, const VerifyOptions& opt) {
  check_spec(s);
  return verify_family(s, default_window(s), opt);
}

// ---------------------------------------------------------------------------
// corollary lines

bool corollary_coprimality(int line, int ell, int m) {
  switch (line) {
    case 9: return std::gcd(2 * ell + 1, 2 * m + 1) == 1;
    case 10: return std::gcd(2 * ell + 1, 2 * m + 2) == 1;
    case 11: return std::gcd(2 * ell + 2, 2 * m + 1) == 1;
    default: return true;
  }
}

namespace {

CorollaryLine raw_line(int line, int ell, int m, Exp mu, Exp k) {
  const Exp l = ell, mm = m;
  using F = FamilyId;
  CorollaryLine c{line, F::alpha, F::beta, 0, 0, 0, 0, 0, 0, 0};
  Exp s = 0;
  auto set = [&](F a, F b, Exp M, Exp i, Exp j, Exp lp, Exp mp, Exp ss) {
    c.first = a;
    c.second = b;
    c.M = M;
    c.r = M * mu;
    c.i = i;
    c.j = j;
    c.lpow = static_cast<unsigned>(lp);
    c.mpow = static_cast<unsigned>(mp);
    s = ss;
  };
  switch (line) {
    case 1: set(F::phi, F::psi, 2 * l + 8 * mm + 5, k, 2 * k, 2 * l + 1, 2 * mm + 1, 2 * l + 6 * mm + 4); break;
    case 2:
      set(F::alpha, F::beta, 8 * l + 6 * mm + 3, 2 * k, k, 2 * l + 2 * mm + 1, 2 * mm + 1, 6 * l + 4 * mm + 2);
      break;
    case 3:
      set(F::alpha, F::beta, 4 * l + 6 * mm + 5, 2 * k, k, 2 * l + 4 * mm + 3, 4 * mm + 2, 2 * l + 2 * mm + 2);
      break;
    case 4: {
      const Exp M = 4 * l + 2 * mm + 3;
      set(F::gamma, F::delta, M, k, M * mu + k, 2 * l + 1, 2 * mm + 1, 3 * l + mm + 2);
      break;
    }
    case 5: {
      const Exp M = 2 * l + 4 * mm + 3;
      set(F::gamma, F::epsilon, M, k, M * mu + 2 * k, 2 * l + 1, 2 * mm + 1, 2 * l + 2 * mm + 2);
      break;
    }
    case 6: set(F::gamma, F::delta, 4 * l + 2 * mm + 3, k, k, 2 * l + 1, 2 * mm + 1, l + mm + 1); break;
    case 7:
      set(F::gamma, F::epsilon, 2 * l + 16 * mm + 9, k, 4 * k, 2 * l + 1, 2 * mm + 1, 2 * l + 12 * mm + 7);
      break;
    case 8:
      set(F::delta, F::epsilon, 16 * l + 2 * mm + 9, 2 * k, k, 2 * l + 1, 2 * mm + 1, 10 * l + 2 * mm + 6);
      break;
    case 9:
      set(F::gamma, F::delta, 2 * l + 4 * mm + 3, (2 * mm + 1) * k, (2 * l + 1) * k, 2 * l + 1, 2 * mm + 1,
          -2 * (2 * mm + 1) * (2 * mm + 1));
      break;
    case 10:
      set(F::delta, F::epsilon, 2 * l + 4 * mm + 5, (2 * mm + 2) * k, (2 * l + 1) * k, 2 * l + 1, 2 * mm + 2,
          -2 * (2 * mm + 2) * (2 * mm + 2));
      break;
    case 11:
      set(F::gamma, F::epsilon, 4 * l + 2 * mm + 5, (2 * mm + 1) * k, (4 * l + 4) * k, 2 * l + 2, 2 * mm + 1,
          -3 * (2 * l + 2) * (2 * l + 2));
      break;
    default: throw std::invalid_argument("corollary line must be 1..11");
  }
  c.s_times_k = s * k;
  return c;
}

bool wide(FamilyId f) { return f == FamilyId::gamma || f == FamilyId::delta || f == FamilyId::epsilon; }

bool subscripts_ok(const CorollaryLine& c) {
  const Exp jmax = (wide(c.first) && wide(c.second)) ? 2 * c.r : c.r;
  return 0 < c.i && c.i < c.r && 0 < c.j && c.j < jmax;
}

}  // namespace

CorollaryLine corollary_line(int line, int ell, int m, Exp mu, Exp k) {
  if (ell < 0 || m < 0 || mu < 1) throw std::invalid_argument("need ell, m >= 0 and mu >= 1");
  const auto c = raw_line(line, ell, m, mu, k);
  if (!corollary_coprimality(line, ell, m)) throw std::invalid_argument("coprimality side condition fails");
  if (std::gcd(k, c.M) != 1) throw std::invalid_argument("need gcd(k, M) = 1");
  if (!subscripts_ok(c)) throw std::invalid_argument("subscripts out of range for this k");
  return c;
}

std::vector<Exp> corollary_k_range(int line, int ell, int m, Exp mu) {
  std::vector<Exp> out;
  const Exp M = raw_line(line, ell, m, mu, 1).M;
  for (Exp k = 1; k < 2 * M * mu; ++k) {
    const auto c = raw_line(line, ell, m, mu, k);
    if (std::gcd(k, M) == 1 && subscripts_ok(c)) out.push_back(k);
  }
  return out;
}

VerificationReport verify_corollary_line(int line, int ell, int m, Exp mu, Exp k, Exp n_max) {
  if (n_max < 0) throw std::invalid_argument("need n_max >= 0");
  const auto c = corollary_line(line, ell, m, mu, k);
  VerificationReport r;
  r.kind = "corollary";
  r.subject = {{"line", line}, {"ell", ell}, {"m", m}, {"mu", mu}, {"k", k}, {"n_max", n_max},
               {"chi", {to_string(c.first), to_string(c.second)}},
               {"i", c.i}, {"j", c.j}, {"r", c.r}, {"lpow", c.lpow}, {"mpow", c.mpow}};
  r.M = c.M;
  r.sigma = -c.s_times_k;
  const Exp res = mod(Int(c.s_times_k), Int(c.M)).get_si();
  // exponents res, res + M, ..., res + n_max M
  r.window = {0, res + n_max * c.M + 1};
  r.passed = true;
  r.details["residue"] = res;
  for (FamilyId f : {c.first, c.second}) {
    const auto g = family_series(f, c.i, c.j, c.r, c.lpow, c.mpow, r.window);
    const auto vr = vanishes_on(g, c.M, res);
    r.checked += vr.checked;
    r.details[to_string(f)] = {{"checked", vr.checked}, {"vanishes", vr.vanishes},
                               {"witness", witness_json(vr.witness)}};
    if (!vr.vanishes && r.passed) {
      r.passed = false;
      r.witness = vr.witness;
      r.details["failing_chi"] = to_string(f);
    }
  }
  return r;
}

VerificationReport verify_sporadic(const std::string& name, Exp order) {
  if (order < 0) throw std::invalid_argument("need order >= 0");
  VerificationReport r;
  r.kind = "sporadic";
  r.subject = {{"name", name}, {"order", order}};
  r.window = {0, order + 1};
  LaurentSeries g;
  std::vector<Exp> residues;
  if (name == "richmond-szekeres") {
    g = poch_product({{1, 1, 8, 1}, {1, 7, 8, 1}, {1, 3, 8, -1}, {1, 5, 8, -1}}, r.window);
    r.M = 4;
    residues = {2};
  } else if (name == "hirschhorn") {
    g = family_series(FamilyId::gamma, 1, 1, 5, 1, 3, r.window);
    r.M = 5;
    residues = {2, 4};
  } else {
    throw std::invalid_argument("unknown sporadic result " + name);
  }
  r.passed = true;
  auto per = nlohmann::json::array();
  for (Exp res : residues) {
    const auto vr = vanishes_on(g, r.M, res);
    r.checked += vr.checked;
    per.push_back({{"residue", res}, {"checked", vr.checked}, {"vanishes", vr.vanishes},
                   {"witness", witness_json(vr.witness)}});
    if (!vr.vanishes && r.passed) {
      r.passed = false;
      r.witness = vr.witness;
    }
  }
  r.details["residues"] = per;
  return r;
}

// ---------------------------------------------------------------------------
// grids and batches

std::vector<FamilySpec> family_grid(Family f, int max_lm, const std::vector<Exp>& mus) {
  std::vector<FamilySpec> out;
  for (int l = 0; l <= max_lm; ++l)
    for (int m = 0; m <= max_lm; ++m) {
      if (!coprimality_holds(f, l, m)) continue;
      for (Exp mu : mus)
        for (const auto& [ka, la] : admissible_kappa_lambda(f))
          for (Exp k : k_range(f, l, m, mu)) out.push_back({f, l, m, mu, k, ka, la, 0});
    }
  return out;
}

VerificationReport run_task(const Task& t, const VerifyOptions& opt) {
  switch (t.kind) {
    case Task::Kind::Family: {
      Window w = default_window(t.spec);
      if (t.hi) w.hi = *t.hi;
      return verify_family(t.spec, w, opt);
    }
    case Task::Kind::Corollary: return verify_corollary_line(t.line, t.ell, t.m, t.mu, t.k, t.n_max);
    case Task::Kind::Sporadic: return verify_sporadic(t.name, t.order);
  }
  throw std::logic_error("bad task kind");
}

namespace {

// A manifest field: absent, a number, or an array of numbers.
template <class T>
std::vector<T> values(const nlohmann::json& inst, const char* key, std::vector<T> fallback) {
  if (!inst.contains(key)) return fallback;
  const auto& v = inst.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

std::vector<int> upto(int n) {
  std::vector<int> v;
  for (int i = 0; i <= n; ++i) v.push_back(i);
  return v;
}

}  // namespace

std::vector<Task> tasks_from_manifest(const nlohmann::json& manifest) {
  std::optional<Exp> hi;
  if (manifest.contains("window") && manifest.at("window").contains("hi"))
    hi = manifest.at("window").at("hi").get<Exp>();
  std::vector<Task> out;
  for (const auto& inst : manifest.at("instances")) {
    if (inst.contains("sporadic")) {
      Task t;
      t.kind = Task::Kind::Sporadic;
      t.name = inst.at("sporadic").get<std::string>();
      t.order = inst.value("order", Exp{400});
      out.push_back(t);
      continue;
    }
    const auto ells = values<int>(inst, "ell", upto(2));
    const auto ms = values<int>(inst, "m", upto(2));
    const auto mus = values<Exp>(inst, "mu", {1, 2});
    if (inst.contains("corollary")) {
      const int line = inst.at("corollary").get<int>();
      for (int l : ells)
        for (int m : ms) {
          if (!corollary_coprimality(line, l, m)) continue;
          for (Exp mu : mus)
            for (Exp k : values<Exp>(inst, "k", corollary_k_range(line, l, m, mu))) {
              Task t;
              t.kind = Task::Kind::Corollary;
              t.line = line;
              t.ell = l;
              t.m = m;
              t.mu = mu;
              t.k = k;
              t.n_max = inst.value("n_max", Exp{20});
              corollary_line(line, l, m, mu, k);  // validate now
              out.push_back(t);
            }
        }
      continue;
    }
    const auto name = inst.at("family").get<std::string>();
    const auto f = family_from_name(name);
    if (!f) throw std::invalid_argument("unknown family id " + name);
    std::vector<std::pair<int, int>> kl;
    if (inst.contains("kappa") || inst.contains("lambda")) {
      for (int ka : values<int>(inst, "kappa", {0, 1}))
        for (int la : values<int>(inst, "lambda", {0, 1})) {
          const auto adm = admissible_kappa_lambda(*f);
          if (std::find(adm.begin(), adm.end(), std::make_pair(ka, la)) != adm.end()) kl.emplace_back(ka, la);
        }
    } else {
      kl = admissible_kappa_lambda(*f);
    }
    const std::optional<Exp> ihi = inst.contains("hi") ? std::optional<Exp>(inst.at("hi").get<Exp>()) : hi;
    for (int l : ells)
      for (int m : ms) {
        if (!coprimality_holds(*f, l, m)) continue;
        for (Exp mu : mus)
          for (const auto& [ka, la] : kl)
            for (Exp k : values<Exp>(inst, "k", k_range(*f, l, m, mu))) {
              Task t;
              t.spec = {*f, l, m, mu, k, ka, la, inst.value("sigma_shift", Exp{0})};
              t.hi = ihi;
              check_spec(t.spec);
              out.push_back(t);
            }
      }
  }
  return out;
}

std::size_t run_batch(const std::vector<Task>& tasks, unsigned jobs,
                      const std::function<void(std::size_t, const VerificationReport&)>& sink,
                      const VerifyOptions& opt) {
  jobs = std::max(1u, jobs);
  std::vector<std::optional<VerificationReport>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t emitted = 0, failures = 0;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      VerificationReport r;
      try {
        r = run_task(tasks[i], opt);
      } catch (const std::exception& ex) {
        r.kind = "error";
        r.passed = false;
        r.details["error"] = ex.what();
      }
      std::lock_guard<std::mutex> lock(mu);
      slots[i] = std::move(r);
      // flush everything that is now contiguous
      while (emitted < slots.size() && slots[emitted]) {
        if (!slots[emitted]->passed) ++failures;
        if (sink) sink(emitted, *slots[emitted]);
        slots[emitted].reset();
        ++emitted;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return failures;
}

}  // namespace thetavanish

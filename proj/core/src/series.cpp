#include "thetavanish/series.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <sstream>

namespace thetavanish {

namespace {

// r += x * y, with a fast path for a small x (theta coefficients are tiny).
inline void addmul(mpz_class& r, const mpz_class& x, const mpz_class& y) {
  if (mpz_fits_slong_p(x.get_mpz_t())) {
    long s = x.get_si();
    if (s == 1) {
      mpz_add(r.get_mpz_t(), r.get_mpz_t(), y.get_mpz_t());
    } else if (s == -1) {
      mpz_sub(r.get_mpz_t(), r.get_mpz_t(), y.get_mpz_t());
    } else if (s > 0) {
      mpz_addmul_ui(r.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(s));
    } else if (s != LONG_MIN) {
      mpz_submul_ui(r.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(-s));
    } else {
      mpz_addmul(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    }
    return;
  }
  mpz_addmul(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
}

Exp val_or_hi(const LaurentSeries& a) {
  auto v = a.valuation();
  return v ? *v : a.window().hi;
}

}  // namespace

LaurentSeries::LaurentSeries() : w_{0, 1} {}

LaurentSeries::LaurentSeries(Window w) : w_(w) {
  if (w.lo >= w.hi) throw SeriesError("empty window");
}

LaurentSeries LaurentSeries::from_terms(Window w, std::vector<Term> terms) {
  if (w.lo >= w.hi) throw SeriesError("empty window");
  std::sort(terms.begin(), terms.end(),
            [](const Term& x, const Term& y) { return x.first < y.first; });
  LaurentSeries s(w);
  for (auto& t : terms) {
    if (t.first >= w.hi) break;
    if (!s.terms_.empty() && s.terms_.back().first == t.first) {
      s.terms_.back().second += t.second;
      if (s.terms_.back().second == 0) s.terms_.pop_back();
    } else if (t.second != 0) {
      s.terms_.push_back(std::move(t));
    }
  }
  if (!s.terms_.empty() && s.terms_.front().first < s.w_.lo) s.w_.lo = s.terms_.front().first;
  return s;
}

LaurentSeries LaurentSeries::from_dense(Window w, const std::vector<mpz_class>& coeffs) {
  if (static_cast<Exp>(coeffs.size()) != w.size()) throw SeriesError("dense size mismatch");
  LaurentSeries s(w);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) s.terms_.emplace_back(w.lo + static_cast<Exp>(i), coeffs[i]);
  return s;
}

std::optional<Exp> LaurentSeries::valuation() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().first;
}

mpz_class LaurentSeries::coeff_at(Exp e) const {
  if (!w_.contains(e)) {
    std::ostringstream os;
    os << "exponent " << e << " outside window [" << w_.lo << "," << w_.hi << ")";
    throw WindowError(os.str());
  }
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const Term& t, Exp x) { return t.first < x; });
  if (it != terms_.end() && it->first == e) return it->second;
  return 0;
}

LaurentSeries LaurentSeries::truncate(Exp new_hi) const {
  if (new_hi > w_.hi) throw WindowError("cannot extend a series beyond its window");
  LaurentSeries s(Window{w_.lo, new_hi});
  for (const auto& t : terms_) {
    if (t.first >= new_hi) break;
    s.terms_.push_back(t);
  }
  return s;
}

LaurentSeries LaurentSeries::with_lo(Exp new_lo) const {
  LaurentSeries s = *this;
  s.w_.lo = std::min(new_lo, w_.lo);
  return s;
}

std::vector<mpz_class> LaurentSeries::dense() const {
  std::vector<mpz_class> out(static_cast<std::size_t>(w_.size()));
  for (const auto& t : terms_) out[static_cast<std::size_t>(t.first - w_.lo)] = t.second;
  return out;
}

std::string LaurentSeries::to_string() const {
  std::ostringstream os;
  if (terms_.empty()) os << "0";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << "+";
    os << terms_[i].second.get_str() << "*q^" << terms_[i].first;
  }
  os << " window=[" << w_.lo << "," << w_.hi << ")";
  return os.str();
}

nlohmann::json LaurentSeries::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_) terms.push_back({t.first, t.second.get_str()});
  return {{"window", {w_.lo, w_.hi}}, {"terms", terms}};
}

LaurentSeries LaurentSeries::from_json(const nlohmann::json& j) {
  Window w{j.at("window").at(0).get<Exp>(), j.at("window").at(1).get<Exp>()};
  std::vector<Term> terms;
  for (const auto& t : j.at("terms")) {
    mpz_class c;
    if (t.at(1).is_string())
      c = mpz_class(t.at(1).get<std::string>());
    else
      c = mpz_class(std::to_string(t.at(1).get<long long>()));
    terms.emplace_back(t.at(0).get<Exp>(), c);
  }
  return from_terms(w, std::move(terms));
}

bool LaurentSeries::operator==(const LaurentSeries& o) const {
  return w_ == o.w_ && terms_ == o.terms_;
}

LaurentSeries monomial(const mpz_class& c, Exp e, Window w) {
  return LaurentSeries::from_terms(w, {{e, c}});
}

LaurentSeries one(Window w) { return monomial(1, 0, w); }

LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b) {
  Window w{std::min(a.window().lo, b.window().lo), std::min(a.window().hi, b.window().hi)};
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto i = a.terms().begin(), ie = a.terms().end();
  auto j = b.terms().begin(), je = b.terms().end();
  while (i != ie || j != je) {
    if (j == je || (i != ie && i->first < j->first)) {
      if (i->first >= w.hi) { i = ie; continue; }
      out.push_back(*i++);
    } else if (i == ie || j->first < i->first) {
      if (j->first >= w.hi) { j = je; continue; }
      out.push_back(*j++);
    } else {
      if (i->first >= w.hi) break;
      mpz_class c = i->second + j->second;
      if (c != 0) out.emplace_back(i->first, std::move(c));
      ++i;
      ++j;
    }
  }
  return LaurentSeries::from_terms(w, std::move(out));
}

LaurentSeries neg(const LaurentSeries& a) { return scale(a, -1); }

LaurentSeries sub(const LaurentSeries& a, const LaurentSeries& b) { return add(a, neg(b)); }

LaurentSeries scale(const LaurentSeries& a, const mpz_class& c) {
  std::vector<Term> out;
  if (c != 0) {
    out.reserve(a.size());
    for (const auto& t : a.terms()) out.emplace_back(t.first, t.second * c);
  }
  return LaurentSeries::from_terms(a.window(), std::move(out));
}

LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b) {
  // Known-zero prefixes let the true valuations extend the exact range.
  const Exp va = val_or_hi(a), vb = val_or_hi(b);
  Window w{a.window().lo + b.window().lo,
           std::min(va + b.window().hi, vb + a.window().hi)};
  if (a.is_zero() || b.is_zero()) return LaurentSeries(w);

  const bool a_outer = a.size() <= b.size();
  const auto& outer = a_outer ? a.terms() : b.terms();
  const auto& inner = a_outer ? b.terms() : a.terms();

  const double work = static_cast<double>(outer.size()) * static_cast<double>(inner.size());
  if (static_cast<double>(w.size()) <= 8.0 * work + 4096.0) {
    std::vector<mpz_class> buf(static_cast<std::size_t>(w.size()));
    for (const auto& [eo, co] : outer) {
      const Exp limit = w.hi - eo;
      for (const auto& [ei, ci] : inner) {
        if (ei >= limit) break;
        addmul(buf[static_cast<std::size_t>(eo + ei - w.lo)], co, ci);
      }
    }
    return LaurentSeries::from_dense(w, buf);
  }
  std::map<Exp, mpz_class> acc;
  for (const auto& [eo, co] : outer) {
    const Exp limit = w.hi - eo;
    for (const auto& [ei, ci] : inner) {
      if (ei >= limit) break;
      addmul(acc[eo + ei], co, ci);
    }
  }
  std::vector<Term> out(acc.begin(), acc.end());
  return LaurentSeries::from_terms(w, std::move(out));
}

LaurentSeries pow(const LaurentSeries& a, unsigned n) {
  if (n == 0) {
    // Relative precision of a carries over to its powers.
    return one(Window{0, a.window().hi - val_or_hi(a) > 0 ? a.window().hi - val_or_hi(a)
                                                          : a.window().hi - a.window().lo});
  }
  LaurentSeries r = a;
  for (unsigned i = 1; i < n; ++i) r = mul(r, a);
  return r;
}

LaurentSeries div(const LaurentSeries& a, const LaurentSeries& b) {
  auto e0o = b.valuation();
  if (!e0o) throw NotInvertible("divisor vanishes on its window");
  const Exp e0 = *e0o;
  const mpz_class& b0 = b.terms().front().second;
  if (b0 != 1 && b0 != -1) throw NotInvertible("divisor's lowest coefficient is not +-1");

  const Exp va = val_or_hi(a);
  Window w{a.window().lo - e0,
           std::min(a.window().hi - e0, va - e0 + (b.window().hi - e0))};
  const std::size_t span = static_cast<std::size_t>(w.size());
  const Exp alo = a.window().lo;

  std::vector<mpz_class> r(span);
  for (const auto& [e, c] : a.terms()) {
    if (e - alo >= static_cast<Exp>(span)) break;
    r[static_cast<std::size_t>(e - alo)] = c;
  }
  const bool neg_lead = b0 < 0;
  for (std::size_t t = 0; t < span; ++t) {
    if (r[t] == 0) continue;
    if (neg_lead) mpz_neg(r[t].get_mpz_t(), r[t].get_mpz_t());
    const mpz_class& c = r[t];
    for (std::size_t k = 1; k < b.terms().size(); ++k) {
      const auto& [eb, cb] = b.terms()[k];
      const std::size_t idx = t + static_cast<std::size_t>(eb - e0);
      if (idx >= span) break;
      mpz_submul(r[idx].get_mpz_t(), cb.get_mpz_t(), c.get_mpz_t());
    }
  }
  return LaurentSeries::from_dense(w, r);
}

LaurentSeries shift(const LaurentSeries& a, Exp k) {
  std::vector<Term> out(a.terms().begin(), a.terms().end());
  for (auto& t : out) t.first += k;
  return LaurentSeries::from_terms(Window{a.window().lo + k, a.window().hi + k}, std::move(out));
}

LaurentSeries dilate(const LaurentSeries& a, Exp k) {
  if (k < 1) throw SeriesError("dilation factor must be positive");
  std::vector<Term> out(a.terms().begin(), a.terms().end());
  for (auto& t : out) t.first *= k;
  return LaurentSeries::from_terms(Window{a.window().lo * k, a.window().hi * k}, std::move(out));
}

bool agree_on_common(const LaurentSeries& a, const LaurentSeries& b) {
  const Exp lo = std::max(a.window().lo, b.window().lo);
  const Exp hi = std::min(a.window().hi, b.window().hi);
  auto clip = [&](const LaurentSeries& s) {
    std::vector<Term> v;
    for (const auto& t : s.terms())
      if (t.first >= lo && t.first < hi) v.push_back(t);
    return v;
  };
  // Terms of either series below the other's lo must vanish too, since lo
  // is a valuation bound.
  auto below = [&](const LaurentSeries& s) {
    for (const auto& t : s.terms())
      if (t.first < lo) return true;
    return false;
  };
  if (lo < hi && (below(a) && b.window().lo > a.window().lo)) return false;
  if (lo < hi && (below(b) && a.window().lo > b.window().lo)) return false;
  return clip(a) == clip(b);
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return add(a, b); }
LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return sub(a, b); }
LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) { return mul(a, b); }

}  // namespace thetavanish

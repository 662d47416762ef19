#include "thetavanish/huffing.hpp"

#include <stdexcept>

namespace thetavanish {

namespace {

Exp emod(Exp a, Exp m) {
  Exp r = a % m;
  return r < 0 ? r + m : r;
}

void check_modulus(Exp M) {
  if (M < 1) throw std::invalid_argument("modulus must be positive");
}

}  // namespace

LaurentSeries extract_progression(const LaurentSeries& g, Exp M, Exp r) {
  check_modulus(M);
  const Exp rr = emod(r, M);
  std::vector<Term> out;
  for (const auto& t : g.terms())
    if (emod(t.first, M) == rr) out.push_back(t);
  return LaurentSeries::from_terms(g.window(), std::move(out));
}

LaurentSeries huff(const LaurentSeries& g, Exp M) { return extract_progression(g, M, 0); }

Exp progression_count(Window w, Exp M, Exp r) {
  check_modulus(M);
  const Exp rr = emod(r, M);
  // first e >= lo with e = rr mod M
  const Exp first = w.lo + emod(rr - w.lo, M);
  if (first >= w.hi) return 0;
  return (w.hi - 1 - first) / M + 1;
}

VanishResult vanishes_on(const LaurentSeries& g, Exp M, Exp r) {
  check_modulus(M);
  VanishResult res;
  res.checked = progression_count(g.window(), M, r);
  const Exp rr = emod(r, M);
  for (const auto& t : g.terms()) {
    if (emod(t.first, M) == rr) {
      res.vanishes = false;
      res.witness = Witness{t.first, t.second};
      break;
    }
  }
  return res;
}

}  // namespace thetavanish

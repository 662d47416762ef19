#pragma once

#include <optional>

#include "thetavanish/series.hpp"

namespace thetavanish {

// Keeps the terms whose exponent is divisible by M.  Exponents and window
// are unchanged.
LaurentSeries huff(const LaurentSeries& g, Exp M);

// Terms with exponent = r (mod M), 0 <= r < M after reduction.
LaurentSeries extract_progression(const LaurentSeries& g, Exp M, Exp r);

struct Witness {
  Exp exponent;
  mpz_class coeff;
};

struct VanishResult {
  bool vanishes = true;
  std::optional<Witness> witness;  // smallest offending exponent
  Exp checked = 0;                 // progression exponents inside the window
};

VanishResult vanishes_on(const LaurentSeries& g, Exp M, Exp r);

// Number of exponents e = r (mod M) inside the window.
Exp progression_count(Window w, Exp M, Exp r);

}  // namespace thetavanish

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

namespace thetavanish {

using Exp = std::int64_t;

// Half-open exponent interval [lo, hi).
struct Window {
  Exp lo = 0;
  Exp hi = 1;

  bool contains(Exp e) const { return lo <= e && e < hi; }
  Exp size() const { return hi - lo; }
  bool operator==(const Window&) const = default;
};

class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Asking for a coefficient the series does not know.
class WindowError : public SeriesError {
 public:
  using SeriesError::SeriesError;
};

class NotInvertible : public SeriesError {
 public:
  using SeriesError::SeriesError;
};

using Term = std::pair<Exp, mpz_class>;

// Truncated Laurent series in q with integer coefficients.
//
// The window [lo, hi) has two meanings: nothing lives below lo (lo is a
// valuation bound), and every coefficient in [lo, hi) is exact.  Anything
// at or beyond hi is unknown.  Terms are kept sorted with no zeros, so two
// series compare equal iff they have the same window and the same terms.
class LaurentSeries {
 public:
  LaurentSeries();
  explicit LaurentSeries(Window w);

  // Terms may come in any order and may repeat; they are summed.  Terms at
  // or beyond hi are dropped.  A term below lo lowers lo.
  static LaurentSeries from_terms(Window w, std::vector<Term> terms);

  // Builds directly from a dense coefficient array; coeffs[i] is the
  // coefficient of q^(w.lo + i).  coeffs.size() must equal w.size().
  static LaurentSeries from_dense(Window w, const std::vector<mpz_class>& coeffs);

  const Window& window() const { return w_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  // Lowest exponent carrying a nonzero coefficient, if any.
  std::optional<Exp> valuation() const;

  // Throws WindowError outside [lo, hi).
  mpz_class coeff_at(Exp e) const;

  // Same terms, smaller hi.  new_hi must not exceed hi.
  LaurentSeries truncate(Exp new_hi) const;

  // Same series viewed on a larger lo-side window (lo only moves down).
  LaurentSeries with_lo(Exp new_lo) const;

  std::vector<mpz_class> dense() const;

  std::string to_string() const;
  nlohmann::json to_json() const;
  static LaurentSeries from_json(const nlohmann::json& j);

  bool operator==(const LaurentSeries& o) const;
  bool operator!=(const LaurentSeries& o) const { return !(*this == o); }

 private:
  Window w_;
  std::vector<Term> terms_;
};

LaurentSeries monomial(const mpz_class& c, Exp e, Window w);
LaurentSeries one(Window w);

LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries sub(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries neg(const LaurentSeries& a);
LaurentSeries scale(const LaurentSeries& a, const mpz_class& c);
LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries pow(const LaurentSeries& a, unsigned n);
// Long division; the lowest known term of b must be +-1.
LaurentSeries div(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries shift(const LaurentSeries& a, Exp k);
// Substitutes q -> q^k for k >= 1.
LaurentSeries dilate(const LaurentSeries& a, Exp k);

// Coefficient-wise equality on the intersection of the two windows.
bool agree_on_common(const LaurentSeries& a, const LaurentSeries& b);

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);

}  // namespace thetavanish

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thetavanish/series.hpp"

namespace thetavanish {

// f(a, b) with a = (-1)^kappa q^x, b = (-1)^kappa q^y.  Needs x + y >= 1.
struct ThetaSpec {
  int kappa = 0;
  Exp x = 1;
  Exp y = 1;
  bool operator==(const ThetaSpec&) const = default;
};

// f(sa q^x, sb q^y) with independent signs sa, sb in {+1, -1}.
struct SignedTheta {
  int sa = 1;
  Exp x = 1;
  int sb = 1;
  Exp y = 1;
};

// Smallest exponent x n(n+1)/2 + y n(n-1)/2 over all integers n.
Exp theta_min_exponent(Exp x, Exp y);

LaurentSeries theta_sum(const ThetaSpec& spec, Window w);
LaurentSeries theta_general(const SignedTheta& spec, Window w);

// prod_{k >= 0} (1 - sign q^(j + r k)).
LaurentSeries pochhammer(int sign, Exp j, Exp r, Window w);

// Jacobi triple product form (-a, -b, ab; ab)_oo.  Needs x, y >= 1.
LaurentSeries theta_prod(const ThetaSpec& spec, Window w);

enum class FamilyId { alpha, beta, gamma, delta, epsilon, phi, psi };

std::string to_string(FamilyId id);
std::optional<FamilyId> family_from_string(const std::string& s);

LaurentSeries family_series(FamilyId id, Exp i, Exp j, Exp r, unsigned l, unsigned m, Window w);

// One factor prod_{k >= 0} (1 - sign q^(j + r k))^power, power possibly
// negative.  Used to assemble arbitrary eta-quotient style products.
struct PochFactor {
  int sign = 1;
  Exp j = 1;
  Exp r = 1;
  int power = 1;
};

LaurentSeries poch_product(const std::vector<PochFactor>& factors, Window w);

}  // namespace thetavanish

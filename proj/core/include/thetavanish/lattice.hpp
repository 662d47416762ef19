#pragma once

#include <array>
#include <optional>

#include <nlohmann/json.hpp>

#include "thetavanish/numtheory.hpp"

namespace thetavanish {

using Vec2 = std::array<Int, 2>;

struct GcdProfile {
  Int dstar;  // gcd(u, v, M)
  Int d;      // gcd(u, v)
  Int du;     // gcd(u, M)
  Int dv;     // gcd(v, M)
  Int uprime;
  Int vprime;
};

GcdProfile gcd_profile(const Int& u, const Int& v, const Int& M);

// Solutions (m, n) of u m + v n + w = 0 (mod M), written as
// shift + s * basis1 + t * basis2.  The raw coefficients a1, b1, a2, b2
// are kept so callers can check the defining conditions.
struct CongruenceLattice {
  Vec2 shift{0, 0};
  Vec2 basis1{1, 0};
  Vec2 basis2{0, 1};
  Int a1 = 1, b1 = 0, a2 = 0, b2 = 1;
  GcdProfile profile;

  Int index() const;  // |det(basis1, basis2)|
};

CongruenceLattice solve_homogeneous(const Int& u, const Int& v, const Int& M);
std::optional<CongruenceLattice> solve_inhomogeneous(const Int& u, const Int& v, const Int& w,
                                                     const Int& M);

// A particular solution of (u/d) m0 + (v/d) n0 = -w K / d, d = gcd(u, v).
// Empty when d does not divide w K or u = v = 0.
std::optional<Vec2> solve_prescribed_K(const Int& u, const Int& v, const Int& w, const Int& K);

bool contains(const CongruenceLattice& lat, const Vec2& point);

// Same point set, basis in lower triangular Hermite form
// ((h11, h21), (0, h22)), 0 <= h21 < h22, and shift reduced into
// [0, h11) x [0, h22).
CongruenceLattice hermite_normal_form(const CongruenceLattice& lat);

// The three defining conditions on (a1, b1, a2, b2) plus the coprimality
// hypotheses.  Returns the name of the first failing check, if any.
std::optional<std::string> check_conditions(const CongruenceLattice& lat, const Int& u,
                                            const Int& v, const Int& M);

nlohmann::json to_json(const CongruenceLattice& lat);

}  // namespace thetavanish

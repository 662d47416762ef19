#pragma once

#include <cstdint>
#include <optional>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

namespace thetavanish {

using Int = mpz_class;

Int gcd(const Int& a, const Int& b);
Int gcd(const Int& a, const Int& b, const Int& c);
Int lcm(const Int& a, const Int& b);

// Nonnegative remainder for m > 0.
Int mod(const Int& a, const Int& m);
// Floor division for b != 0.
Int floor_div(const Int& a, const Int& b);

// True when d divides a; 0 divides only 0.
bool divides(const Int& d, const Int& a);

struct Bezout {
  Int g, x, y;  // a*x + b*y = g >= 0
};
Bezout ext_gcd(const Int& a, const Int& b);

// x = r mod n, with 0 <= r < n.
struct Residue {
  Int r;
  Int n;
};

// Solutions of a*x = b (mod n), n >= 1.
std::optional<Residue> solve_linear_congruence(const Int& a, const Int& b, const Int& n);

// Combines two residue classes with arbitrary moduli.
std::optional<Residue> crt(const Residue& x, const Residue& y);

std::int64_t to_i64(const Int& v);

// JSON number when it fits in 64 bits, decimal string otherwise.
nlohmann::json int_to_json(const Int& v);
Int int_from_json(const nlohmann::json& j);

}  // namespace thetavanish

#include "thetavanish/numtheory.hpp"

#include <stdexcept>

namespace thetavanish {

Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Int gcd(const Int& a, const Int& b, const Int& c) { return gcd(gcd(a, b), c); }

Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Int mod(const Int& a, const Int& m) {
  if (m <= 0) throw std::domain_error("modulus must be positive");
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int floor_div(const Int& a, const Int& b) {
  if (b == 0) throw std::domain_error("division by zero");
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

bool divides(const Int& d, const Int& a) {
  if (d == 0) return a == 0;
  return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

Bezout ext_gcd(const Int& a, const Int& b) {
  Bezout r;
  mpz_gcdext(r.g.get_mpz_t(), r.x.get_mpz_t(), r.y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

std::optional<Residue> solve_linear_congruence(const Int& a, const Int& b, const Int& n) {
  if (n < 1) throw std::domain_error("modulus must be positive");
  const Int an = mod(a, n), bn = mod(b, n);
  const Int g = gcd(an, n);  // gcd(0, n) = n
  if (!divides(g, bn)) return std::nullopt;
  const Int n2 = n / g;
  if (n2 == 1) return Residue{0, 1};
  Int inv;
  const Int a2 = mod(an / g, n2);
  mpz_invert(inv.get_mpz_t(), a2.get_mpz_t(), n2.get_mpz_t());
  return Residue{mod((bn / g) * inv, n2), n2};
}

std::optional<Residue> crt(const Residue& x, const Residue& y) {
  // x.r + x.n * t = y.r (mod y.n)
  auto t = solve_linear_congruence(x.n, y.r - x.r, y.n);
  if (!t) return std::nullopt;
  const Int n = lcm(x.n, y.n);
  return Residue{mod(x.r + x.n * t->r, n), n};
}

std::int64_t to_i64(const Int& v) {
  if (!mpz_fits_slong_p(v.get_mpz_t())) throw std::overflow_error("integer does not fit in 64 bits");
  return v.get_si();
}

nlohmann::json int_to_json(const Int& v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) return v.get_si();
  return v.get_str();
}

Int int_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Int(j.get<std::string>());
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
  throw std::invalid_argument("expected an integer");
}

}  // namespace thetavanish

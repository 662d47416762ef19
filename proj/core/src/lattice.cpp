#include "thetavanish/lattice.hpp"

#include <stdexcept>
#include <string>

namespace thetavanish {

namespace {

Int abs_(const Int& a) { return a < 0 ? Int(-a) : a; }

Int round_div(const Int& a, const Int& b) {
  // nearest integer to a / b, b != 0
  Int q = floor_div(2 * a + b, 2 * b);
  return q;
}

}  // namespace

GcdProfile gcd_profile(const Int& u, const Int& v, const Int& M) {
  if (M < 1) throw std::invalid_argument("M must be positive");
  GcdProfile p;
  p.dstar = gcd(u, v, M);
  p.d = gcd(u, v);
  p.du = gcd(u, M);
  p.dv = gcd(v, M);
  p.uprime = u / p.du;
  p.vprime = v / p.dv;
  return p;
}

Int CongruenceLattice::index() const {
  return abs_(basis1[0] * basis2[1] - basis1[1] * basis2[0]);
}

std::optional<std::string> check_conditions(const CongruenceLattice& lat, const Int& u,
                                            const Int& v, const Int& M) {
  const auto& p = lat.profile;
  const Int modulus = p.dstar * M / (p.du * p.dv);
  if (!divides(modulus, p.uprime * lat.a1 + p.vprime * lat.a2)) return "cond_a";
  if (!divides(modulus, p.uprime * lat.b1 + p.vprime * lat.b2)) return "cond_b";
  if (abs_(lat.a1 * lat.b2 - lat.a2 * lat.b1) != modulus) return "cond_det";
  if (gcd(lat.a1, lat.b1) != 1) return "gcd(a1,b1)";
  if (gcd(lat.a2, lat.b2) != 1) return "gcd(a2,b2)";
  // the basis columns must solve the congruence too
  for (const auto* b : {&lat.basis1, &lat.basis2})
    if (!divides(M, u * (*b)[0] + v * (*b)[1])) return "basis";
  return std::nullopt;
}

CongruenceLattice solve_homogeneous(const Int& u, const Int& v, const Int& M) {
  CongruenceLattice lat;
  lat.profile = gcd_profile(u, v, M);
  const auto& p = lat.profile;
  if (u == 0 && v == 0) return lat;  // all of Z^2

  // u dv x + v du y = d M
  const Int P = u * p.dv, R = v * p.du, rhs = p.d * M;
  const Bezout bz = ext_gcd(P, R);
  if (!divides(bz.g, rhs)) throw std::logic_error("lattice: Bezout equation unsolvable");
  const Int sc = rhs / bz.g;
  Int x0 = bz.x * sc, y0 = bz.y * sc;
  const Int sx = R / bz.g, sy = P / bz.g;  // x = x0 + t sx, y = y0 - t sy
  Int best_t = 0;
  if (sx != 0) {
    best_t = round_div(-x0, sx);
  } else if (sy != 0) {
    best_t = round_div(y0, sy);
  }
  // smallest |alpha|, then smallest |beta|, then smallest t
  Int bx = x0 + best_t * sx, by = y0 - best_t * sy;
  for (int dt = -2; dt <= 2; ++dt) {
    const Int t = best_t + dt;
    const Int x = x0 + t * sx, y = y0 - t * sy;
    const bool better = abs_(x) < abs_(bx) || (abs_(x) == abs_(bx) && abs_(y) < abs_(by)) ||
                        (abs_(x) == abs_(bx) && abs_(y) == abs_(by) && x > bx);
    if (better) {
      bx = x;
      by = y;
    }
  }
  lat.a1 = bx;
  lat.b1 = -v * p.dstar / (p.d * p.dv);
  lat.a2 = by;
  lat.b2 = u * p.dstar / (p.d * p.du);
  lat.basis1 = {p.dv / p.dstar * lat.a1, p.du / p.dstar * lat.a2};
  lat.basis2 = {p.dv / p.dstar * lat.b1, p.du / p.dstar * lat.b2};
  if (auto bad = check_conditions(lat, u, v, M))
    throw std::logic_error("lattice: verification failed (" + *bad + ")");
  return lat;
}

std::optional<CongruenceLattice> solve_inhomogeneous(const Int& u, const Int& v, const Int& w,
                                                     const Int& M) {
  CongruenceLattice lat = solve_homogeneous(u, v, M);
  if (!divides(lat.profile.dstar, w)) return std::nullopt;
  // g1 z = -w (mod M) with g1 = gcd(u, v) = u x1 + v y1
  const Bezout bz = ext_gcd(u, v);
  auto z = solve_linear_congruence(bz.g, -w, M);
  if (!z) throw std::logic_error("lattice: particular solution missing");
  lat.shift = {bz.x * z->r, bz.y * z->r};
  // reduce the shift to a canonical representative
  const CongruenceLattice h = hermite_normal_form(lat);
  lat.shift = h.shift;
  return lat;
}

std::optional<Vec2> solve_prescribed_K(const Int& u, const Int& v, const Int& w, const Int& K) {
  const Int d = gcd(u, v);
  if (d == 0) return std::nullopt;
  if (!divides(d, w * K)) return std::nullopt;
  const Int up = u / d, vp = v / d, c = -w * K / d;
  const Bezout bz = ext_gcd(up, vp);  // g = 1
  Int m0 = bz.x * c, n0 = bz.y * c;
  // m0 + t vp, n0 - t up; minimise |m0|
  if (vp != 0) {
    Int t = round_div(-m0, vp);
    Int bm = m0 + t * vp, bn = n0 - t * up;
    for (int dt = -1; dt <= 1; ++dt) {
      Int mm = m0 + (t + dt) * vp, nn = n0 - (t + dt) * up;
      if (abs_(mm) < abs_(bm) || (abs_(mm) == abs_(bm) && mm > bm)) {
        bm = mm;
        bn = nn;
      }
    }
    m0 = bm;
    n0 = bn;
  } else if (up != 0) {
    n0 = n0 - round_div(n0, up) * up;
  }
  return Vec2{m0, n0};
}

bool contains(const CongruenceLattice& lat, const Vec2& point) {
  const Int x = point[0] - lat.shift[0], y = point[1] - lat.shift[1];
  const Int& b11 = lat.basis1[0];
  const Int& b21 = lat.basis1[1];
  const Int& b12 = lat.basis2[0];
  const Int& b22 = lat.basis2[1];
  const Int D = b11 * b22 - b12 * b21;
  if (D == 0) throw std::logic_error("lattice: singular basis");
  return divides(D, b22 * x - b12 * y) && divides(D, -b21 * x + b11 * y);
}

CongruenceLattice hermite_normal_form(const CongruenceLattice& lat) {
  CongruenceLattice h = lat;
  const Vec2& c1 = lat.basis1;
  const Vec2& c2 = lat.basis2;
  const Bezout bz = ext_gcd(c1[0], c2[0]);
  Vec2 n1, n2;
  if (bz.g == 0) throw std::logic_error("lattice: singular basis");
  n1 = {bz.g, bz.x * c1[1] + bz.y * c2[1]};
  const Int f1 = c1[0] / bz.g, f2 = c2[0] / bz.g;
  n2 = {0, f1 * c2[1] - f2 * c1[1]};
  if (n2[1] < 0) n2[1] = -n2[1];
  if (n2[1] == 0) throw std::logic_error("lattice: singular basis");
  n1[1] = mod(n1[1], n2[1]);
  h.basis1 = n1;
  h.basis2 = n2;
  // reduce shift
  Vec2 s = lat.shift;
  const Int k1 = floor_div(s[0], n1[0]);
  s[0] -= k1 * n1[0];
  s[1] -= k1 * n1[1];
  s[1] = mod(s[1], n2[1]);
  h.shift = s;
  return h;
}

nlohmann::json to_json(const CongruenceLattice& lat) {
  const auto& j = int_to_json;
  return {{"shift", {j(lat.shift[0]), j(lat.shift[1])}},
          {"basis", {{j(lat.basis1[0]), j(lat.basis1[1])}, {j(lat.basis2[0]), j(lat.basis2[1])}}}};
}

}  // namespace thetavanish

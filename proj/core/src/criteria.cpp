#include "thetavanish/criteria.hpp"

#include <stdexcept>
#include <vector>

#include "thetavanish/expand.hpp"
#include "thetavanish/lattice.hpp"

namespace thetavanish {

namespace {

using Q = mpq_class;

Q frac(const Int& n, const Int& d) {
  Q q(n, d);
  q.canonicalize();
  return q;
}

bool integral(const Q& q) { return q.get_den() == 1; }

int parity(const Int& x) { return mpz_odd_p(x.get_mpz_t()) ? 1 : 0; }

Int binom2(const Int& n) { return n * (n - 1) / 2; }

struct Gcds {
  Int dstar, d, du, dv, S;
};

Gcds gcds(const CriterionInput& in) {
  return {gcd(in.u, in.v, in.M), gcd(in.u, in.v), gcd(in.u, in.M), gcd(in.v, in.M),
          in.A * in.v * in.v + in.B * in.u * in.u};
}

struct Condition {
  const char* name;
  bool holds;
};

// First failing condition, if any.
std::optional<std::string> first_failure(const std::vector<Condition>& cs) {
  for (const auto& c : cs)
    if (!c.holds) return std::string(c.name);
  return std::nullopt;
}

// Shared tail of both cancelation theorems: divisibility list, then epsilon.
// The two differ in the first condition and in the kappa quotient.
CancelOutcome cancel(const CriterionInput& in, const CriterionInput& partner, const Int& first_lhs,
                     const Int& first_rhs, const char* first_name, bool check_variant) {
  CancelOutcome out;
  out.partner = partner;
  const Gcds g = gcds(in);
  const bool pre_zero = !divides(g.dstar, in.w), partner_zero = !divides(g.dstar, partner.w);
  if (g.d == 0) {
    if (pre_zero && partner_zero) {
      out.kind = CancelOutcome::Kind::BothZero;
      out.reason = "u = v = 0 and M does not divide w";
    } else {
      out.reason = "u = v = 0";
    }
    return out;
  }
  if (pre_zero) {
    if (partner_zero) {
      out.kind = CancelOutcome::Kind::BothZero;
      out.reason = "d* divides neither w nor the partner's w";
    } else {
      out.reason = "d* divides the partner's w but not w";
    }
    return out;
  }
  const Int K = compute_K(in.u, in.v, in.w, in.M);
  out.K = K;
  const Int &A = in.A, &Ap = in.Aprime, &B = in.B, &Bp = in.Bprime, &u = in.u, &v = in.v, &w = in.w;
  const Int Y = B * (A - 2 * Ap) * u * v + A * (B - 2 * Bp) * v * v + 2 * A * B * v * w * K;
  Int X, Xden;
  if (!check_variant) {
    X = (A - 2 * Ap) * v * v - (B - 2 * Bp) * u * v - 2 * B * u * w * K;
    Xden = g.S;
  } else {
    X = B * (A - 2 * Ap) * u * u + A * (B - 2 * Bp) * u * v + 2 * A * B * u * w * K;
    Xden = A * g.S;
  }
  const std::vector<Condition> cs{
      {first_name, divides(first_lhs, first_rhs)},
      {"d_u(Av^2+Bu^2) | Av*dM", divides(g.du * g.S, A * v * g.d * in.M)},
      {"d_v(Av^2+Bu^2) | Bu*dM", divides(g.dv * g.S, B * u * g.d * in.M)},
      {check_variant ? "A(Av^2+Bu^2) | B(A-2A')u^2+A(B-2B')uv+2ABuwK"
                     : "(Av^2+Bu^2) | (A-2A')v^2-(B-2B')uv-2BuwK",
       divides(Xden, X)},
      {"B(Av^2+Bu^2) | B(A-2A')uv+A(B-2B')v^2+2ABvwK", divides(B * g.S, Y)},
  };
  if (auto f = first_failure(cs)) {
    out.reason = *f;
    return out;
  }
  const Int xq = X / Xden, yq = Y / (B * g.S);
  const Int eps = (check_variant ? -in.kappa * xq : in.kappa * xq) - in.lambda * yq;
  out.kind = CancelOutcome::Kind::Pair;
  out.epsilon = parity(eps);
  return out;
}

}  // namespace

ThetaSpec CriterionInput::factor1() const {
  return {kappa, to_i64(u + Aprime * M), to_i64(-u + (A - Aprime) * M)};
}

ThetaSpec CriterionInput::factor2() const {
  return {lambda, to_i64(v + Bprime * M), to_i64(-v + (B - Bprime) * M)};
}

void validate(const CriterionInput& in) {
  if (in.M < 1) throw std::invalid_argument("M must be positive");
  if (in.A < 1 || in.B < 1) throw std::invalid_argument("A and B must be positive");
  if ((in.kappa != 0 && in.kappa != 1) || (in.lambda != 0 && in.lambda != 1))
    throw std::invalid_argument("kappa and lambda must be 0 or 1");
}

LaurentSeries build_H(const CriterionInput& in, Window w) {
  validate(in);
  return theta_monomial_product(0, to_i64(in.w), {in.factor1(), in.factor2()}, w.hi);
}

LaurentSeries evaluate(const ClosedForm& c, Window w) {
  return theta_monomial_product(c.prefactor_sign_parity, to_i64(c.prefactor_exponent),
                                {c.factor1, c.factor2}, w.hi);
}

HuffAnalysis huff_analyze(const CriterionInput& in) {
  validate(in);
  HuffAnalysis out;
  const Gcds g = gcds(in);
  if (!divides(g.dstar, in.w)) {
    out.kind = HuffAnalysis::Kind::Zero;
    out.reason = "d* does not divide w";
    return out;
  }
  out.kind = HuffAnalysis::Kind::AssumptionFailed;
  if (g.d == 0) {
    out.reason = "u = v = 0";
    return out;
  }
  const Int &A = in.A, &Ap = in.Aprime, &B = in.B, &Bp = in.Bprime, &u = in.u, &v = in.v, &M = in.M;
  if (!divides(g.du * g.S, A * v * g.d * M)) {
    out.reason = "d_u(Av^2+Bu^2) | Av*dM";
    return out;
  }
  if (!divides(g.dv * g.S, B * u * g.d * M)) {
    out.reason = "d_v(Av^2+Bu^2) | Bu*dM";
    return out;
  }
  ClosedForm c;
  c.K = compute_K(u, v, in.w, M);
  const auto mn = solve_prescribed_K(u, v, in.w, c.K);
  if (!mn) throw std::logic_error("no (m0, n0) for the chosen K");
  c.m0 = (*mn)[0];
  c.n0 = (*mn)[1];
  const Int &d = g.d, &ds = g.dstar, &S = g.S, &m0 = c.m0, &n0 = c.n0;
  const Q At = frac(A * B * d * d * M * M, ds * ds * S);
  const Q Atp = frac(A * B * d * d * M * M, 2 * ds * ds * S) - frac(A * B * (u + v) * d * M, 2 * ds * S) +
                frac((Ap * B * u + A * Bp * v) * d * M, ds * S) +
                frac(A * B * (u * m0 + v * n0) * d * M, ds * S);
  const Q Bt = frac(S, d * d);
  const Q Btp = frac(S, 2 * d * d) + frac(A * v - B * u, 2 * d) - frac(Ap * v - Bp * u, d) -
                frac(A * v * m0 - B * u * n0, d);
  const Q s1 = frac((B * u * in.kappa + A * v * in.lambda) * d * M, ds * S);
  for (auto [q, name] : {std::pair{&At, "A~"}, {&Atp, "A~'"}, {&Bt, "B~"}, {&Btp, "B~'"}, {&s1, "sign"}})
    if (!integral(*q)) {
      out.reason = std::string(name) + " not integral";
      return out;
    }
  c.Atilde = At.get_num();
  c.Atilde_prime = Atp.get_num();
  c.Btilde = Bt.get_num();
  c.Btilde_prime = Btp.get_num();
  const Int s2 = (-v * in.kappa + u * in.lambda) / d;
  c.prefactor_sign_parity = parity(in.kappa * m0 + in.lambda * n0);
  c.prefactor_exponent =
      M * (A * binom2(m0) + Ap * m0 + B * binom2(n0) + Bp * n0) + (u * m0 + v * n0 + in.w);
  const Int dm = d * M / ds;
  c.factor1 = {parity(s1.get_num()), to_i64(dm + c.Atilde_prime * M),
               to_i64(-dm + (c.Atilde - c.Atilde_prime) * M)};
  c.factor2 = {parity(s2), to_i64(c.Btilde_prime * M), to_i64((c.Btilde - c.Btilde_prime) * M)};
  out.kind = HuffAnalysis::Kind::Closed;
  out.closed = c;
  out.reason.clear();
  return out;
}

Int crt_K(const Int& a, const Int& b) {
  if (a < 1 || b < 1) throw std::invalid_argument("moduli must be positive");
  auto r = crt(Residue{mod(Int(1), a), a}, Residue{0, b});
  if (!r) throw std::domain_error("K moduli are not coprime");
  return r->r;
}

Int compute_K(const Int& u, const Int& v, const Int& w, const Int& M) {
  const Int ds = gcd(u, v, M), d = gcd(u, v), g = gcd(u, v, w);
  if (d == 0) throw std::invalid_argument("u = v = 0");
  if (!divides(ds, w)) throw std::invalid_argument("d* does not divide w");
  return crt_K(M / ds, d / g);
}

std::optional<JWitness> check_zero_by_J(const CriterionInput& in) {
  validate(in);
  const Gcds g = gcds(in);
  if (g.d == 0) return std::nullopt;
  const Int &A = in.A, &Ap = in.Aprime, &B = in.B, &Bp = in.Bprime, &u = in.u, &v = in.v, &w = in.w,
            &M = in.M, &d = g.d, &S = g.S;
  if (!divides(g.dstar, w)) return std::nullopt;
  if (!divides(g.du * S, A * v * d * M) || !divides(g.dv * S, B * u * d * M)) return std::nullopt;
  if (parity((-v * in.kappa + u * in.lambda) / d) != 1) return std::nullopt;
  const Int N = 2 * d * S;
  const Int c1 = -2 * d * A * v * w - d * A * u * v + d * B * u * u + 2 * d * Ap * u * v -
                 2 * d * Bp * u * u - A * u * v * v - B * u * u * u;
  const Int c2 = -2 * d * B * u * w + d * A * v * v - d * B * u * v - 2 * d * Ap * v * v +
                 2 * d * Bp * u * v + A * v * v * v + B * u * u * v;
  auto r1 = solve_linear_congruence(2 * d * M * A * v, -c1, N);
  auto r2 = solve_linear_congruence(2 * d * M * B * u, -c2, N);
  if (!r1 || !r2) return std::nullopt;
  auto r = crt(*r1, *r2);
  if (!r) return std::nullopt;
  JWitness j{r->r, 0, 0};
  j.m0 = (2 * d * M * B * u * j.J + c2) / N;
  j.n0 = (2 * d * M * A * v * j.J + c1) / N;
  if (u * j.m0 + v * j.n0 + w != j.J * M) throw std::logic_error("J witness inconsistent");
  return j;
}

CriterionInput hat_partner(const CriterionInput& in) {
  if (!divides(in.B, 2 * in.Bprime * in.v)) throw std::invalid_argument("B does not divide 2B'v");
  CriterionInput p = in;
  p.Bprime = in.B - in.Bprime;
  p.w = in.w + in.v - 2 * in.Bprime * in.v / in.B;
  return p;
}

CriterionInput check_partner(const CriterionInput& in) {
  const Int num = 2 * (in.Aprime * in.B * in.u + in.A * in.Bprime * in.v);
  if (!divides(in.A * in.B, num)) throw std::invalid_argument("AB does not divide 2(A'Bu+AB'v)");
  CriterionInput p = in;
  p.Aprime = in.A - in.Aprime;
  p.Bprime = in.B - in.Bprime;
  p.w = in.w + in.u + in.v - num / (in.A * in.B);
  return p;
}

CancelOutcome pair_cancel_hat(const CriterionInput& in) {
  validate(in);
  const auto p = hat_partner(in);
  const Int ds = gcd(in.u, in.v, in.M);
  return cancel(in, p, ds * in.B, 2 * in.Bprime * in.v, "d*B | 2B'v", false);
}

CancelOutcome pair_cancel_check(const CriterionInput& in) {
  validate(in);
  const auto p = check_partner(in);
  const Int ds = gcd(in.u, in.v, in.M);
  return cancel(in, p, ds * in.A * in.B, 2 * (in.Aprime * in.B * in.u + in.A * in.Bprime * in.v),
                "d*AB | 2(A'Bu+AB'v)", true);
}

std::string to_string(HuffAnalysis::Kind k) {
  switch (k) {
    case HuffAnalysis::Kind::Zero: return "zero";
    case HuffAnalysis::Kind::Closed: return "closed_form";
    case HuffAnalysis::Kind::AssumptionFailed: return "assumption_failed";
  }
  return "?";
}

std::string to_string(CancelOutcome::Kind k) {
  switch (k) {
    case CancelOutcome::Kind::BothZero: return "both_zero";
    case CancelOutcome::Kind::Pair: return "pair";
    case CancelOutcome::Kind::NotApplicable: return "not_applicable";
  }
  return "?";
}

nlohmann::json to_json(const CriterionInput& in) {
  return {{"M", int_to_json(in.M)},           {"A", int_to_json(in.A)},
          {"Aprime", int_to_json(in.Aprime)}, {"B", int_to_json(in.B)},
          {"Bprime", int_to_json(in.Bprime)}, {"u", int_to_json(in.u)},
          {"v", int_to_json(in.v)},           {"w", int_to_json(in.w)},
          {"kappa", in.kappa},                {"lambda", in.lambda}};
}

CriterionInput criterion_from_json(const nlohmann::json& j) {
  CriterionInput in;
  in.M = int_from_json(j.at("M"));
  in.A = int_from_json(j.at("A"));
  in.Aprime = int_from_json(j.value("Aprime", nlohmann::json(0)));
  in.B = int_from_json(j.at("B"));
  in.Bprime = int_from_json(j.value("Bprime", nlohmann::json(0)));
  in.u = int_from_json(j.at("u"));
  in.v = int_from_json(j.at("v"));
  in.w = int_from_json(j.value("w", nlohmann::json(0)));
  in.kappa = j.value("kappa", 0);
  in.lambda = j.value("lambda", 0);
  validate(in);
  return in;
}

namespace {
nlohmann::json theta_json(const ThetaSpec& t) { return {{"kappa", t.kappa}, {"x", t.x}, {"y", t.y}}; }
}  // namespace

nlohmann::json to_json(const ClosedForm& c) {
  return {{"sign_parity", c.prefactor_sign_parity},
          {"q_exponent", int_to_json(c.prefactor_exponent)},
          {"m0", int_to_json(c.m0)},
          {"n0", int_to_json(c.n0)},
          {"K", int_to_json(c.K)},
          {"Atilde", int_to_json(c.Atilde)},
          {"Atilde_prime", int_to_json(c.Atilde_prime)},
          {"Btilde", int_to_json(c.Btilde)},
          {"Btilde_prime", int_to_json(c.Btilde_prime)},
          {"factor1", theta_json(c.factor1)},
          {"factor2", theta_json(c.factor2)}};
}

nlohmann::json to_json(const HuffAnalysis& h) {
  nlohmann::json j{{"branch", to_string(h.kind)}};
  if (h.closed) j["closed_form"] = to_json(*h.closed);
  if (!h.reason.empty()) j["reason"] = h.reason;
  return j;
}

nlohmann::json to_json(const CancelOutcome& c) {
  nlohmann::json j{{"branch", to_string(c.kind)}};
  if (c.kind == CancelOutcome::Kind::Pair) j["epsilon"] = c.epsilon;
  if (c.partner) j["partner"] = to_json(*c.partner);
  if (c.K) j["K"] = int_to_json(*c.K);
  if (!c.reason.empty()) j["reason"] = c.reason;
  return j;
}

nlohmann::json to_json(const std::optional<JWitness>& j) {
  if (!j) return {{"branch", "inconclusive"}};
  return {{"branch", "zero"}, {"J", int_to_json(j->J)}, {"m0", int_to_json(j->m0)}, {"n0", int_to_json(j->n0)}};
}

}  // namespace thetavanish

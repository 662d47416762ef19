#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "thetavanish/numtheory.hpp"
#include "thetavanish/series.hpp"
#include "thetavanish/theta.hpp"

namespace thetavanish {

// H(q) = q^w f((-1)^kappa q^(u+A'M), (-1)^kappa q^(-u+(A-A')M))
//           f((-1)^lambda q^(v+B'M), (-1)^lambda q^(-v+(B-B')M))
struct CriterionInput {
  Int M = 1;
  Int A = 1, Aprime = 0;
  Int B = 1, Bprime = 0;
  Int u = 0, v = 0, w = 0;
  int kappa = 0, lambda = 0;

  ThetaSpec factor1() const;
  ThetaSpec factor2() const;
  bool operator==(const CriterionInput&) const = default;
};

void validate(const CriterionInput& in);  // throws std::invalid_argument

LaurentSeries build_H(const CriterionInput& in, Window w);

// The right side of the closed huffing formula: a signed monomial times two
// thetas in q^M.
struct ClosedForm {
  int prefactor_sign_parity = 0;
  Int prefactor_exponent = 0;
  Int m0 = 0, n0 = 0, K = 1;
  Int Atilde, Atilde_prime, Btilde, Btilde_prime;
  ThetaSpec factor1;
  ThetaSpec factor2;
};

LaurentSeries evaluate(const ClosedForm& c, Window w);

struct HuffAnalysis {
  enum class Kind { Zero, Closed, AssumptionFailed };
  Kind kind = Kind::Zero;
  std::optional<ClosedForm> closed;
  std::string reason;  // which divisibility failed
};

HuffAnalysis huff_analyze(const CriterionInput& in);

// Smallest nonnegative K with K = 1 (mod a) and K = 0 (mod b).
Int crt_K(const Int& a, const Int& b);
// K for (u, v, w, M): moduli M/d* and d/gcd(u, v, w).  Needs d* | w.
Int compute_K(const Int& u, const Int& v, const Int& w, const Int& M);

struct JWitness {
  Int J, m0, n0;
};
std::optional<JWitness> check_zero_by_J(const CriterionInput& in);

struct CancelOutcome {
  enum class Kind { BothZero, Pair, NotApplicable };
  Kind kind = Kind::NotApplicable;
  int epsilon = 0;  // parity, Pair only
  std::optional<CriterionInput> partner;
  std::optional<Int> K;
  std::string reason;
};

// Partner with B' -> B - B', w -> w + (1 - 2B'/B) v.
CriterionInput hat_partner(const CriterionInput& in);
// Partner with A' -> A - A', B' -> B - B', w -> w + (1 - 2A'/A) u + (1 - 2B'/B) v.
CriterionInput check_partner(const CriterionInput& in);

CancelOutcome pair_cancel_hat(const CriterionInput& in);
CancelOutcome pair_cancel_check(const CriterionInput& in);

nlohmann::json to_json(const CriterionInput& in);
CriterionInput criterion_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ClosedForm& c);
nlohmann::json to_json(const HuffAnalysis& h);
nlohmann::json to_json(const CancelOutcome& c);
nlohmann::json to_json(const std::optional<JWitness>& j);

std::string to_string(HuffAnalysis::Kind k);
std::string to_string(CancelOutcome::Kind k);

}  // namespace thetavanish

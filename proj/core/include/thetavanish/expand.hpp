#pragma once

#include <vector>

#include "thetavanish/series.hpp"
#include "thetavanish/theta.hpp"

namespace thetavanish {

// (n_1, ..., n_m) with 0 <= n_i <= i.
using IndexTuple = std::vector<int>;

bool in_index_set(const IndexTuple& t);
std::vector<IndexTuple> index_set(int m);  // all of I_m, lexicographic
IndexTuple tau(const IndexTuple& t);

// sigma(n_1..n_m; q^A).
LaurentSeries sigma(const IndexTuple& t, Exp A, Window w);

// M_s^(m)(q^A) and N_s^(m1,m2)(q^A', q^A), exact below hi.  Both are
// memoised; the cache is shared and guarded.
LaurentSeries cofactor_M(int m, int s, Exp A, Exp hi);
LaurentSeries cofactor_N(int m1, int m2, int s, Exp Aprime, Exp A, Exp hi);

// weight * (-1)^sign_exponent * q^q_exponent * f(theta) * cofactor
struct ExpansionTerm {
  int sign_exponent = 0;
  Exp q_exponent = 0;
  ThetaSpec theta;
  LaurentSeries cofactor;
  mpz_class weight = 1;
};

// Sum of terms equals denominator times the expanded series.
struct Expansion {
  std::vector<ExpansionTerm> terms;
  int denominator = 1;
};

LaurentSeries evaluate(const Expansion& e, Window w);

// f((-1)^k q^(k+A'), (-1)^k q^(-k+A-A'))^m as sum over s of
// (-1)^(ks) q^(ks+A's) f(...) M_s(q^A).
Expansion power_expansion(int kappa, Exp k, Exp A, Exp Aprime, int m, Window w);

// The paired form: P_0 M_0 + sum P_s M_s with P_s a half-sum (denominator 2).
Expansion pair_expansion(int kappa, Exp k, Exp A, Exp Aprime, int m, Window w);

// The A = 2A' variant with quarter-sums (denominator 4).
Expansion pair_expansion_symmetric(int kappa, Exp k, Exp Aprime, int m, Window w);

// f((-1)^k q^(k+A'), ..)^m1 f((-1)^k q^(k+A-A'), ..)^m2.
Expansion two_power_expansion(int kappa, Exp k, Exp A, Exp Aprime, int m1, int m2, Window w);

// 2 f(-q^mu, -q^(2mu))^m (f(-q^2k, -q^(mu-2k)) / f((-1)^k q^k, (-1)^k q^(mu-k)))^m
// (denominator 2).
Expansion quotient_expansion(int kappa, Exp k, Exp mu, int m, Window w);

// Left side of the quotient identity, computed directly with div.
LaurentSeries quotient_power(int kappa, Exp k, Exp mu, int m, Window w);

bool quintuple_check(int kappa, Exp k, Exp mu, Window w);
bool schroter_check(Exp A, Exp B, Exp x_exp, Exp y_exp, Window w);
bool symmetry_Ms(int m, int s, Exp A, Window w);
bool only_quotient_power_check(int mprime, Exp mu, int kappa, Exp k, Window w);

// f((-1)^k q^(Mk+M^2 mu), (-1)^k q^(-Mk)) + (-1)^(k+1) q^(-Mk) f((-1)^k q^(Mk), ..)
// is identically zero.
bool vanishing_pair_check(Exp M, Exp mu, Exp k, int kappa, Window w);

// (-1)^sign * weight * q^qexp * prod f(theta_i), exact below hi.
LaurentSeries theta_monomial_product(int sign, Exp qexp, const std::vector<ThetaSpec>& thetas,
                                     Exp hi, const mpz_class& weight = 1);

}  // namespace thetavanish

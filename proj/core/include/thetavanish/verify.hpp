#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "thetavanish/criteria.hpp"
#include "thetavanish/huffing.hpp"
#include "thetavanish/series.hpp"

namespace thetavanish {

// Theorem family lines.  Experimental is the power-(4m+4) variant of I-3,
// which is conjectured only; it is never part of the default grid.
enum class Family { I_1, I_2, I_3, I2_1, I2_2, I3_1, I3_2, I3_3, II_1, II_2, II_3, Experimental };

std::string to_string(Family f);
std::optional<Family> family_from_name(const std::string& s);
std::vector<Family> all_families();  // the eleven proven lines

enum class FamilyType { I, I2, I3, II, Experimental };
FamilyType family_type(Family f);

struct FamilySpec {
  Family family = Family::I_1;
  int ell = 0, m = 0;
  Exp mu = 1;
  Exp k = 1;
  int kappa = 0, lambda = 0;
  // Added to sigma.  Nonzero only for negative controls.
  Exp sigma_shift = 0;
  bool operator==(const FamilySpec&) const = default;
};

struct ModulusShift {
  Exp M;
  Exp sigma;  // the formula value; sigma_shift is not applied
};
ModulusShift family_M_sigma(const FamilySpec& s);

std::vector<std::pair<int, int>> admissible_kappa_lambda(Family f);
// The gcd side conditions of the Type II lines; true elsewhere.
bool coprimality_holds(Family f, int ell, int m);
bool exponents_positive(const FamilySpec& s);
// Throws std::invalid_argument naming the first violated invariant.
void check_spec(const FamilySpec& s);

// k >= 1 with gcd(k, M) = 1 and every displayed exponent >= 1.
std::vector<Exp> k_range(Family f, int ell, int m, Exp mu);

// lo = min(0, sigma) - 1, hi leaves at least min_count progression
// exponents at or above sigma.
Window default_window(const FamilySpec& s, Exp min_count = 20);

// The series inside H_M, q^sigma included.  Product form: every theta is
// expanded by the triple product, so the whole thing is one Pochhammer
// product and a shift.
LaurentSeries build_family_series(const FamilySpec& s, Window w);
// Same series assembled from theta_sum, pow, div and shift.  Slower; used
// as a cross-check.
LaurentSeries build_family_series_direct(const FamilySpec& s, Window w);

struct VerificationReport {
  std::string kind;         // family | corollary | sporadic
  nlohmann::json subject;   // echo of what was checked
  Exp M = 1;
  Exp sigma = 0;
  Window window;
  Exp checked = 0;          // progression exponents examined
  bool passed = false;
  std::optional<Witness> witness;  // first nonzero coefficient on failure
  std::string method = "brute-force";  // or criteria-certified
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(const FamilySpec& s);
FamilySpec family_spec_from_json(const nlohmann::json& j);

struct VerifyOptions {
  // Run the per-term (Type II) or pairing (Type I) certification next to the
  // whole-series check.
  bool certify = true;
};

VerificationReport verify_family(const FamilySpec& s, Window w, const VerifyOptions& opt = {});
VerificationReport verify_family(const FamilySpec& s, const VerifyOptions& opt = {});

// One certified-or-not relation of the pairing strategy.
struct TraceEntry {
  std::string relation;  // A0B0, A0B, AB0, AB, quotient-only, term
  int xi = 0;
  int tau = 0;
  CriterionInput input;
  std::optional<CriterionInput> partner;
  // Claimed: H(input) = (-1)^parity H(partner), or H(input) = 0 without partner.
  int required_parity = 0;
  std::string branch;  // zero_by_J | zero | both_zero | pair | quotient-only | inconclusive
  std::string reason;
  std::optional<JWitness> J;
  bool certified = false;
  bool oracle_holds = false;
};

struct StrategyTrace {
  FamilySpec spec;
  Exp M = 1, sigma = 0;
  Window window;
  std::vector<TraceEntry> entries;
  int certified = 0;
  int inconclusive = 0;
  int contradictions = 0;  // certified but brute force disagrees

  bool all_certified() const { return inconclusive == 0 && !entries.empty(); }
};

// Type I, I.2 and I.3 lines.  Every relation is also oracle-checked on w.
StrategyTrace strategy_trace(const FamilySpec& s, Window w);
// Type II: each product term H(q^sigma A(xi) B(tau)) must vanish.
StrategyTrace term_certification(const FamilySpec& s, Window w);

nlohmann::json to_json(const TraceEntry& e);
nlohmann::json to_json(const StrategyTrace& t, bool with_entries = true);

struct CorollaryLine {
  int line;
  FamilyId first, second;
  Exp i, j, r;       // subscripts
  unsigned lpow, mpow;
  Exp M;
  Exp s_times_k;     // residue numerator: chi(Mn + s k)
};
// Throws std::invalid_argument on bad line number, gcd or subscript range.
CorollaryLine corollary_line(int line, int ell, int m, Exp mu, Exp k);
std::vector<Exp> corollary_k_range(int line, int ell, int m, Exp mu);
bool corollary_coprimality(int line, int ell, int m);

VerificationReport verify_corollary_line(int line, int ell, int m, Exp mu, Exp k, Exp n_max);

// richmond-szekeres: (q,q^7;q^8)/(q^3,q^5;q^8) at 2 mod 4.
// hirschhorn: gamma_{1,1,5,1,3} at 2 and 4 mod 5.  Window is [0, order].
VerificationReport verify_sporadic(const std::string& name, Exp order);

// Every admissible instance with ell, m in [0, max_lm] and the given mu.
std::vector<FamilySpec> family_grid(Family f, int max_lm = 2, const std::vector<Exp>& mus = {1, 2});

// Batch work item.
struct Task {
  enum class Kind { Family, Corollary, Sporadic };
  Kind kind = Kind::Family;
  FamilySpec spec;
  std::optional<Exp> hi;  // family window override
  int line = 0, ell = 0, m = 0;
  Exp mu = 1, k = 1, n_max = 20;
  std::string name;
  Exp order = 400;
};

VerificationReport run_task(const Task& t, const VerifyOptions& opt = {});

// Expands a manifest:
// {"instances":[{"family":"I-1","ell":[0,1],"mu":1,...}, {"corollary":6,...},
//  {"sporadic":"hirschhorn","order":500}], "window":{"hi":N}, "jobs":J}
// Missing family fields mean "all": ell, m in 0..2, mu in {1,2}, admissible
// (kappa, lambda), every k of k_range.  Arrays list explicit values.
std::vector<Task> tasks_from_manifest(const nlohmann::json& manifest);

// Runs tasks on `jobs` threads; sink receives reports in task order.
// Returns the number of failing reports.
std::size_t run_batch(const std::vector<Task>& tasks, unsigned jobs,
                      const std::function<void(std::size_t, const VerificationReport&)>& sink,
                      const VerifyOptions& opt = {});

}  // namespace thetavanish

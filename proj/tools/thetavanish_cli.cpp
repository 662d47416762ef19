// Command line front end.  Every command prints JSON on stdout (one object
// per line); diagnostics go to stderr.  Exit codes: 0 all requested checks
// passed, 1 a check failed, 2 bad usage or input.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "thetavanish/criteria.hpp"
#include "thetavanish/huffing.hpp"
#include "thetavanish/lattice.hpp"
#include "thetavanish/theta.hpp"
#include "thetavanish/verify.hpp"

using namespace thetavanish;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const json& j) { std::cout << j.dump() << '\n'; }

std::string read_source(const std::string& src) {
  if (src == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(src);
  if (!in) throw UsageError("cannot open " + src);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int parse_sign(const std::string& s) {
  if (s == "+" || s == "+1" || s == "1") return 1;
  if (s == "-" || s == "-1") return -1;
  throw UsageError("sign must be + or -");
}

// "s:j:r:p,s:j:r:p,..." -> Pochhammer factors
std::vector<PochFactor> parse_poch_list(const std::string& text) {
  std::vector<PochFactor> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream is(item);
    std::string s, j, r, p = "1";
    if (!std::getline(is, s, ':') || !std::getline(is, j, ':') || !std::getline(is, r, ':'))
      throw UsageError("poch factor must look like sign:j:r[:power]");
    std::getline(is, p, ':');
    out.push_back({parse_sign(s), std::stoll(j), std::stoll(r), std::stoi(p)});
  }
  if (out.empty()) throw UsageError("empty poch product");
  return out;
}

FamilyId parse_chi(const std::string& s) {
  auto f = family_from_string(s);
  if (!f) throw UsageError("unknown coefficient family " + s);
  return *f;
}

// Flags shared by the series sources of `huff`.
struct SeriesSource {
  std::string series_json, series_file;
  std::vector<Exp> theta;  // kappa x y
  std::string poch;
  std::string family;      // chi,i,j,r,l,m
  Exp lo = 0;
  std::optional<Exp> hi;

  void add(CLI::App* app) {
    app->add_option("--series", series_json, "series JSON inline");
    app->add_option("--series-file", series_file, "series JSON file, - for stdin");
    app->add_option("--theta", theta, "kappa x y")->expected(3);
    app->add_option("--poch-product", poch, "sign:j:r[:power],...");
    app->add_option("--family", family, "chi,i,j,r,l,m");
    app->add_option("--lo", lo, "window lo for built series");
    app->add_option("--hi", hi, "window hi for built series");
  }

  LaurentSeries get() const {
    int given = !series_json.empty() + !series_file.empty() + !theta.empty() + !poch.empty() + !family.empty();
    if (given != 1) throw UsageError("give exactly one series source");
    if (!series_json.empty()) return LaurentSeries::from_json(json::parse(series_json));
    if (!series_file.empty()) return LaurentSeries::from_json(json::parse(read_source(series_file)));
    if (!hi) throw UsageError("--hi is required when building a series");
    const Window w{lo, *hi};
    if (!theta.empty()) return theta_sum({static_cast<int>(theta[0]), theta[1], theta[2]}, w);
    if (!poch.empty()) return poch_product(parse_poch_list(poch), w);
    std::stringstream ss(family);
    std::string chi;
    std::getline(ss, chi, ',');
    std::vector<Exp> v;
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stoll(item));
    if (v.size() != 5) throw UsageError("--family needs chi,i,j,r,l,m");
    return family_series(parse_chi(chi), v[0], v[1], v[2], static_cast<unsigned>(v[3]),
                         static_cast<unsigned>(v[4]), w);
  }
};

struct CriterionFlags {
  std::string input;
  std::string M = "1", A = "1", Ap = "0", B = "1", Bp = "0", u = "0", v = "0", w = "0";
  int kappa = 0, lambda = 0;

  void add(CLI::App* app) {
    app->add_option("--input", input, "CriterionInput JSON inline");
    app->add_option("--M", M);
    app->add_option("--A", A);
    app->add_option("--Aprime", Ap);
    app->add_option("--B", B);
    app->add_option("--Bprime", Bp);
    app->add_option("--u", u);
    app->add_option("--v", v);
    app->add_option("--w", w);
    app->add_option("--kappa", kappa);
    app->add_option("--lambda", lambda);
  }

  CriterionInput get() const {
    if (!input.empty()) return criterion_from_json(json::parse(input));
    CriterionInput in;
    in.M = Int(M);
    in.A = Int(A);
    in.Aprime = Int(Ap);
    in.B = Int(B);
    in.Bprime = Int(Bp);
    in.u = Int(u);
    in.v = Int(v);
    in.w = Int(w);
    in.kappa = kappa;
    in.lambda = lambda;
    validate(in);
    return in;
  }
};

struct FamilyFlags {
  std::string id;
  int ell = 0, m = 0, kappa = 0, lambda = 0;
  Exp mu = 1, k = 1, sigma_shift = 0;
  std::optional<Exp> lo, hi;

  void add(CLI::App* app) {
    app->add_option("--id", id, "family line, e.g. I-1, I.2-2, II-3")->required();
    app->add_option("--ell", ell);
    app->add_option("--m", m);
    app->add_option("--mu", mu);
    app->add_option("--kappa", kappa);
    app->add_option("--lambda", lambda);
    app->add_option("--k", k);
    app->add_option("--sigma-shift", sigma_shift, "perturb sigma (negative control)");
    app->add_option("--lo", lo, "default min(0, sigma) - 1");
    app->add_option("--hi", hi, "default: 20 progression coefficients above sigma");
  }

  FamilySpec spec() const {
    auto f = family_from_name(id);
    if (!f) throw UsageError("unknown family id " + id);
    return {*f, ell, m, mu, k, kappa, lambda, sigma_shift};
  }

  Window window(const FamilySpec& s) const {
    Window w = default_window(s);
    if (lo) w.lo = *lo;
    if (hi) w.hi = *hi;
    return w;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"theta series coefficient-vanishing toolkit"};
  app.require_subcommand(1, 1);

  // expand ------------------------------------------------------------------
  auto* expand = app.add_subcommand("expand", "build a series");
  expand->require_subcommand(1, 1);
  bool text = false;
  expand->add_flag("--text", text, "print q-series text instead of JSON");
  Exp lo = 0, hi = 0;

  int th_kappa = 0;
  Exp th_x = 1, th_y = 1;
  auto* ex_theta = expand->add_subcommand("theta", "f((-1)^kappa q^x, (-1)^kappa q^y)");
  ex_theta->add_option("--kappa", th_kappa);
  ex_theta->add_option("--x", th_x)->required();
  ex_theta->add_option("--y", th_y)->required();
  ex_theta->add_option("--lo", lo);
  ex_theta->add_option("--hi", hi)->required();

  std::string p_sign = "+", p_list;
  Exp p_j = 1, p_r = 1;
  int p_power = 1;
  auto* ex_poch = expand->add_subcommand("poch", "prod (1 - sign q^(j + r k))^power, or a list");
  ex_poch->add_option("--sign", p_sign);
  ex_poch->add_option("--j", p_j);
  ex_poch->add_option("--r", p_r);
  ex_poch->add_option("--power", p_power);
  ex_poch->add_option("--product", p_list, "sign:j:r[:power],... instead of one factor");
  ex_poch->add_option("--lo", lo);
  ex_poch->add_option("--hi", hi)->required();

  std::string chi;
  Exp f_i = 1, f_j = 1, f_r = 1;
  unsigned f_l = 1, f_m = 1;
  auto* ex_family = expand->add_subcommand("family", "coefficient family series chi_{i,j,r,l,m}");
  ex_family->add_option("--chi", chi)->required();
  ex_family->add_option("--i", f_i)->required();
  ex_family->add_option("--j", f_j)->required();
  ex_family->add_option("--r", f_r)->required();
  ex_family->add_option("--l", f_l)->required();
  ex_family->add_option("--m", f_m)->required();
  ex_family->add_option("--lo", lo);
  ex_family->add_option("--hi", hi)->required();

  FamilyFlags ex_line_flags;
  auto* ex_line = expand->add_subcommand("line", "the series inside H_M for a theorem family line");
  ex_line_flags.add(ex_line);

  // huff --------------------------------------------------------------------
  auto* huff_cmd = app.add_subcommand("huff", "progression extraction or vanishing check");
  SeriesSource src;
  src.add(huff_cmd);
  Exp h_M = 1, h_r = 0;
  bool h_check = false;
  huff_cmd->add_option("--M", h_M)->required();
  huff_cmd->add_option("--r", h_r);
  huff_cmd->add_flag("--check", h_check, "report whether the progression vanishes");

  // lattice -----------------------------------------------------------------
  auto* lattice = app.add_subcommand("lattice", "linear congruence u m + v n + w = 0 mod M");
  lattice->require_subcommand(1, 1);
  auto* lat_solve = lattice->add_subcommand("solve", "shift and basis");
  std::string l_u, l_v, l_w = "0", l_M;
  bool l_hnf = false;
  lat_solve->add_option("--u", l_u)->required();
  lat_solve->add_option("--v", l_v)->required();
  lat_solve->add_option("--w", l_w);
  lat_solve->add_option("--M", l_M)->required();
  lat_solve->add_flag("--hnf", l_hnf, "reduce to Hermite form");

  // criteria ----------------------------------------------------------------
  auto* criteria = app.add_subcommand("criteria", "huffing criteria on a product of two thetas");
  criteria->require_subcommand(1, 1);
  CriterionFlags cf;
  Window c_window{0, 0};
  bool c_oracle = false;
  auto add_crit = [&](const char* name, const char* help) {
    auto* s = criteria->add_subcommand(name, help);
    cf.add(s);
    s->add_flag("--oracle", c_oracle, "also huff by brute force (needs --hi)");
    s->add_option("--hi", c_window.hi);
    return s;
  };
  auto* cr_analyze = add_crit("analyze", "closed huffing formula");
  auto* cr_zero = add_crit("zero-by-j", "uniform-zero criterion");
  auto* cr_hat = add_crit("hat", "first cancelation (B' -> B - B')");
  add_crit("check", "second cancelation (A' -> A - A', B' -> B - B')");

  // verify ------------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "check theorem lines, corollary lines, sporadic results");
  std::string manifest;
  unsigned jobs = 0;
  bool no_certify = false;
  verify->add_option("--manifest", manifest, "batch manifest JSON, - for stdin");
  verify->add_option("--jobs", jobs, "worker threads (default: manifest value or hardware)");
  verify->add_flag("--no-certify", no_certify, "skip criteria certification");
  verify->require_subcommand(0, 1);

  FamilyFlags vf;
  auto* v_family = verify->add_subcommand("family", "one theorem family instance");
  vf.add(v_family);

  FamilyFlags tf;
  bool t_summary = false;
  auto* v_trace = verify->add_subcommand("trace", "pairing relations and their certificates");
  tf.add(v_trace);
  v_trace->add_flag("--summary", t_summary, "counts only");

  int c_line = 1, c_ell = 0, c_m = 0;
  Exp c_mu = 1, c_k = 1, c_nmax = 20;
  auto* v_cor = verify->add_subcommand("corollary", "explicit vanishing line 1..11");
  v_cor->add_option("--line", c_line)->required();
  v_cor->add_option("--ell", c_ell);
  v_cor->add_option("--m", c_m);
  v_cor->add_option("--mu", c_mu);
  v_cor->add_option("--k", c_k);
  v_cor->add_option("--n-max", c_nmax);

  std::string s_name;
  Exp s_order = 400;
  auto* v_spor = verify->add_subcommand("sporadic", "richmond-szekeres or hirschhorn");
  v_spor->add_option("--name", s_name)->required();
  v_spor->add_option("--order", s_order);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*expand) {
      LaurentSeries g;
      if (*ex_theta) {
        g = theta_sum({th_kappa, th_x, th_y}, {lo, hi});
      } else if (*ex_poch) {
        if (!p_list.empty())
          g = poch_product(parse_poch_list(p_list), {lo, hi});
        else
          g = poch_product({{parse_sign(p_sign), p_j, p_r, p_power}}, {lo, hi});
      } else if (*ex_family) {
        g = family_series(parse_chi(chi), f_i, f_j, f_r, f_l, f_m, {lo, hi});
      } else {
        const auto s = ex_line_flags.spec();
        check_spec(s);
        g = build_family_series(s, ex_line_flags.window(s));
      }
      if (text)
        std::cout << g.to_string() << '\n';
      else
        emit(g.to_json());
      return 0;
    }

    if (*huff_cmd) {
      const auto g = src.get();
      if (h_check) {
        const auto r = vanishes_on(g, h_M, h_r);
        json j{{"vanishes", r.vanishes}, {"checked", r.checked}, {"M", h_M}, {"r", h_r}};
        j["witness"] = r.witness ? json{{"exponent", r.witness->exponent}, {"coeff", r.witness->coeff.get_str()}}
                                 : json(nullptr);
        emit(j);
        return r.vanishes ? 0 : 1;
      }
      emit(extract_progression(g, h_M, h_r).to_json());
      return 0;
    }

    if (*lattice) {
      const Int u(l_u), v(l_v), w(l_w), M(l_M);
      auto lat = solve_inhomogeneous(u, v, w, M);
      if (!lat) {
        emit({{"solvable", false}, {"reason", "d* does not divide w"}});
        return 0;
      }
      if (l_hnf) lat = hermite_normal_form(*lat);
      auto j = to_json(*lat);
      j["solvable"] = true;
      emit(j);
      return 0;
    }

    if (*criteria) {
      const auto in = cf.get();
      auto oracle = [&](json& j, const CriterionInput& x, const char* key) {
        if (!c_oracle) return;
        if (c_window.hi <= 0) throw UsageError("--oracle needs --hi");
        j[key] = huff(build_H(x, c_window), to_i64(x.M)).to_json();
      };
      json j{{"input", to_json(in)}};
      int rc = 0;
      if (*cr_analyze) {
        j["analysis"] = to_json(huff_analyze(in));
      } else if (*cr_zero) {
        const auto wj = check_zero_by_J(in);
        j["zero_by_J"] = to_json(wj);
        rc = wj ? 0 : 1;
      } else {
        const auto out = *cr_hat ? pair_cancel_hat(in) : pair_cancel_check(in);
        j["cancel"] = to_json(out);
        rc = out.kind == CancelOutcome::Kind::NotApplicable ? 1 : 0;
        if (out.partner) oracle(j, *out.partner, "huffed_partner");
      }
      oracle(j, in, "huffed");
      emit(j);
      return rc;
    }

    if (*verify) {
      VerifyOptions opt;
      opt.certify = !no_certify;
      if (!manifest.empty()) {
        const auto m = json::parse(read_source(manifest));
        const auto tasks = tasks_from_manifest(m);
        unsigned n = jobs ? jobs : m.value("jobs", 0u);
        if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
        const auto failures = run_batch(
            tasks, n, [](std::size_t i, const VerificationReport& r) {
              auto j = to_json(r);
              j["index"] = i;
              emit(j);
              std::cout.flush();
            },
            opt);
        std::cerr << tasks.size() << " instances, " << failures << " failed\n";
        return failures == 0 ? 0 : 1;
      }
      if (*v_family) {
        const auto s = vf.spec();
        check_spec(s);
        const auto r = verify_family(s, vf.window(s), opt);
        emit(to_json(r));
        return r.passed ? 0 : 1;
      }
      if (*v_trace) {
        const auto s = tf.spec();
        check_spec(s);
        const auto w = tf.window(s);
        const auto t = family_type(s.family) == FamilyType::II ? term_certification(s, w) : strategy_trace(s, w);
        emit(to_json(t, !t_summary));
        return t.all_certified() && t.contradictions == 0 ? 0 : 1;
      }
      if (*v_cor) {
        const auto r = verify_corollary_line(c_line, c_ell, c_m, c_mu, c_k, c_nmax);
        emit(to_json(r));
        return r.passed ? 0 : 1;
      }
      if (*v_spor) {
        const auto r = verify_sporadic(s_name, s_order);
        emit(to_json(r));
        return r.passed ? 0 : 1;
      }
      throw UsageError("verify needs a subcommand or --manifest");
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: bad JSON: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

#include "mahler/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mahler/contfrac.hpp"
#include "mahler/cyclotomic.hpp"
#include "mahler/errors.hpp"
#include "mahler/gaps.hpp"
#include "mahler/hankel.hpp"
#include "mahler/numeric.hpp"
#include "mahler/presets.hpp"

namespace mahler::cli {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---- input ------------------------------------------------------------

Rat coefficient(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rat(Integer(v.dump()));
  if (v.is_string()) {
    try {
      return parse_rat(v.get<std::string>());
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  throw ParseError(where + ": expected an integer or a \"num/den\" string, got " + v.dump());
}

Poly poly_field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  const json& arr = j.at(key);
  if (!arr.is_array() || arr.empty()) throw ParseError(std::string("field \"") + key + "\" must be a nonempty array");
  std::vector<Rat> c;
  for (std::size_t i = 0; i < arr.size(); ++i) c.push_back(coefficient(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  return Poly(std::move(c));
}

Integer integer_field(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Integer(v.dump());
  if (v.is_string()) {
    Integer out;
    if (out.set_str(v.get<std::string>(), 10) == 0) return out;
  }
  throw ParseError(where + ": expected an integer, got " + v.dump());
}

// ---- output -----------------------------------------------------------

std::string str(const Rat& r) { return to_string(r); }

ordered poly_json(const Poly& p) {
  ordered c = ordered::array();
  for (const Rat& x : p.coeffs()) c.push_back(str(x));
  if (c.empty()) c.push_back("0");
  return ordered{{"coeffs", c}, {"expr", to_string(p)}};
}

ordered system_obj(const MahlerSystem& sys) {
  ordered j;
  ordered a = ordered::array();
  for (const Rat& x : sys.A().coeffs()) a.push_back(str(x));
  ordered b = ordered::array();
  for (const Rat& x : sys.B().coeffs()) b.push_back(str(x));
  j["A"] = a;
  j["B"] = b;
  j["d"] = sys.d();
  if (sys.b()) j["b"] = sys.b()->get_str();
  return j;
}

ordered gap_json(int u, int v) { return ordered::array({u, v}); }

ordered interval_json(const Interval& x) {
  return ordered{{"lo", x.lo_string(17)}, {"hi", x.hi_string(17)}};
}

// Line-per-leaf rendering for --format text.
void render_text(const ordered& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) render_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    const bool flat = std::all_of(j.begin(), j.end(), [](const ordered& x) { return x.is_primitive(); });
    if (flat) {
      out << prefix << ": ";
      for (std::size_t i = 0; i < j.size(); ++i) out << (i ? " " : "") << (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
      out << "\n";
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

std::string timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

// ---- options ----------------------------------------------------------

struct Options {
  std::vector<std::string> presets;
  std::string input;
  std::string system;
  std::string b;
  std::string format = "json";
  std::string output;
  bool no_meta = false;
  int jobs = 1;

  int terms = 0;
  int max_degree = 20;
  int up_to = 20;
  int scan = 30;
  int horizon = 10;
  int degree_cap = 0;
  int phi_floor = 0;
  int max_terms = 1 << 14;
  int n_max = 15;
  int bits = 4096;
  std::string depth = "4,6";
  std::vector<std::string> cyclo_args;
};

std::vector<MahlerSystem> systems(const Options& o) {
  std::optional<Integer> b;
  if (!o.b.empty()) b = integer_field(json(o.b), "--b");
  std::vector<MahlerSystem> out;
  for (const auto& p : o.presets) out.push_back(preset(p, b.value_or(Integer(2))));
  auto from_json = [&](const std::string& text) {
    MahlerSystem s = parse_system(text);
    if (b || !s.b()) return MahlerSystem(s.A(), s.B(), s.d(), b.value_or(Integer(2)));
    return s;
  };
  if (!o.input.empty()) {
    std::ifstream in(o.input);
    if (!in) throw Error("cannot read " + o.input);
    std::stringstream ss;
    ss << in.rdbuf();
    out.push_back(from_json(ss.str()));
  }
  if (!o.system.empty()) out.push_back(from_json(o.system));
  if (out.empty()) throw ParseError("no system given: use --preset, --input or --system");
  return out;
}

RationalityCheck feq_check(const MahlerSystem& sys) {
  return [&sys](const Poly& p, const Poly& q) { return satisfies_functional_equation(sys, p, q); };
}

// Expands until Phi is certified through `need`.
CfExpansion adaptive_cf(const MahlerSystem& sys, int need, int terms, int max_terms) {
  const int head = std::max(0, sys.top() + 1);
  if (terms <= 0) terms = 2 * need + 16 + head;
  for (;;) {
    CfExpansion cf = cf_expand(solve_mahler(sys, terms), std::max(1, need), feq_check(sys));
    if (cf.is_rational || cf.complete_through >= need || 2 * terms > max_terms) return cf;
    terms *= 2;
  }
}

struct Report {
  ordered body;
  int status = kOk;
};

// ---- commands -----------------------------------------------------------

Report cmd_series(const MahlerSystem& sys, const Options& o) {
  const LaurentSeries f = solve_mahler(sys, o.terms > 0 ? o.terms : 20);
  ordered c = ordered::array();
  for (const Rat& x : f.coeffs) c.push_back(str(x));
  return {ordered{{"top", f.top}, {"coeffs", c}, {"valid", f.valid()}}, kOk};
}

ordered cf_json(const CfExpansion& cf) {
  ordered q = ordered::array();
  for (const Poly& a : cf.quotients) q.push_back(poly_json(a));
  ordered cs = ordered::array();
  for (const Convergent& c : cf.convergents) {
    ordered x{{"k", c.k}, {"degree", c.degree}, {"p", poly_json(c.p)}, {"q", poly_json(c.q)}, {"certified", c.certified}};
    x["next_degree"] = c.next_degree ? ordered(*c.next_degree) : ordered(nullptr);
    x["residual_lead"] = c.residual_lead ? ordered(str(*c.residual_lead)) : ordered(nullptr);
    cs.push_back(x);
  }
  ordered j{{"quotients", q}, {"convergents", cs}, {"phi", cf.phi}, {"is_rational", cf.is_rational}};
  j["complete_through"] = cf.complete_through == kUnbounded ? ordered("unbounded") : ordered(cf.complete_through);
  j["horizon"] = cf.horizon;
  return j;
}

Report cmd_cf(const MahlerSystem& sys, const Options& o) {
  const CfExpansion cf = adaptive_cf(sys, o.max_degree, o.terms, o.max_terms);
  return {cf_json(cf), kOk};
}

Report cmd_phi(const MahlerSystem& sys, const Options& o) {
  const CfExpansion cf = adaptive_cf(sys, o.up_to, o.terms, o.max_terms);
  if (!cf.is_rational && cf.complete_through < o.up_to) {
    throw InsufficientPrecision("Phi certified only through " + std::to_string(cf.complete_through));
  }
  std::vector<int> phi;
  for (int v : cf.phi) {
    if (v <= o.up_to) phi.push_back(v);
  }
  return {ordered{{"up_to", o.up_to}, {"phi", phi}, {"is_rational", cf.is_rational}}, kOk};
}

Report cmd_gaps(const MahlerSystem& sys, const Options& o) {
  const CfExpansion cf = adaptive_cf(sys, o.scan, o.terms, o.max_terms);
  if (cf.is_rational) return {ordered{{"is_rational", true}, {"big_gaps", ordered::array()}, {"primitive_gaps", ordered::array()}}, kOk};
  const int cap = o.degree_cap > 0 ? o.degree_cap : default_degree_cap();
  const auto big = find_big_gaps(cf, sys, o.scan);
  const auto prim = find_primitive_gaps(big, sys, cap);
  ordered bj = ordered::array();
  for (const Gap& g : big) bj.push_back(ordered{{"gap", gap_json(g.u, g.v)}, {"p", poly_json(g.p)}, {"q", poly_json(g.q)}});
  ordered pj = ordered::array();
  for (const Gap& g : prim) pj.push_back(gap_json(g.u, g.v));
  return {ordered{{"scan_limit", o.scan},
                  {"threshold", str(sys.big_gap_threshold())},
                  {"phi", cf.phi},
                  {"big_gaps", bj},
                  {"primitive_gaps", pj}},
          kOk};
}

ordered orbit_json(const GapOrbit& g) {
  ordered steps = ordered::array();
  for (const OrbitStep& s : g.steps) {
    steps.push_back(ordered{{"u", s.u}, {"v", s.v}, {"r_c", s.r_c ? ordered(*s.r_c) : ordered(nullptr)}});
  }
  ordered limits = ordered::array();
  for (const Rat& r : g.phase_limits) limits.push_back(str(r));
  ordered j{{"origin", gap_json(g.origin.u, g.origin.v)}, {"status", to_string(g.status)}, {"steps", steps}};
  j["n0"] = g.n0 ? ordered(*g.n0) : ordered(nullptr);
  j["period"] = g.period ? ordered(*g.period) : ordered(nullptr);
  j["R"] = g.R.get_str();
  j["r_u"] = g.r_u.get_str();
  j["r_v"] = g.r_v.get_str();
  j["phase_limits"] = limits;
  j["limit"] = g.limit() ? ordered(str(*g.limit())) : ordered(nullptr);
  j["coprimality"] = ordered{{"proven", g.witness.proven}, {"refuted", g.witness.refuted}, {"detail", g.witness.detail}};
  return j;
}

Report cmd_exponent(const MahlerSystem& sys, const Options& o) {
  ExponentConfig cfg;
  cfg.orbit.horizon = o.horizon;
  if (o.degree_cap > 0) cfg.orbit.degree_cap = o.degree_cap;
  cfg.phi_floor = o.phi_floor;
  cfg.max_terms = o.max_terms;
  cfg.jobs = o.jobs;
  const ExponentResult r = exponent(sys, cfg);
  ordered j;
  if (r.verdict == Verdict::RationalFunction) {
    j["verdict"] = "rational_function";
    j["rational_function"] = ordered{{"p", poly_json(r.p)}, {"q", poly_json(r.q)}};
    j["certified"] = true;
    j["phi"] = r.phi;
    return {j, kOk};
  }
  j["verdict"] = "exponent";
  j["mu"] = str(r.mu);
  j["rho"] = str(r.rho);
  j["certified"] = r.certified;
  j["caveats"] = r.caveats;
  ordered big = ordered::array();
  for (const Gap& g : r.big_gaps) big.push_back(gap_json(g.u, g.v));
  ordered prim = ordered::array();
  for (const Gap& g : r.primitive_gaps) prim.push_back(gap_json(g.u, g.v));
  j["big_gaps"] = big;
  j["primitive_gaps"] = prim;
  if (r.pruning) {
    const PruningRecord& p = *r.pruning;
    j["pruning"] = ordered{{"S", p.S},
                           {"max_primitive_size", p.max_primitive_size},
                           {"size_bound", str(p.size_bound)},
                           {"l_u", p.l_u},
                           {"phi_scan_limit", p.phi_scan_limit},
                           {"pivot", gap_json(p.pivot.u, p.pivot.v)},
                           {"pivot_lower_bound", str(p.pivot_lower_bound)}};
  } else {
    j["pruning"] = nullptr;
  }
  ordered orbits = ordered::array();
  for (const GapOrbit& g : r.orbits) orbits.push_back(orbit_json(g));
  j["orbits"] = orbits;
  j["witness_orbit"] = r.witness ? ordered(*r.witness) : ordered(nullptr);
  j["phi"] = r.phi;
  j["phi_complete_through"] = r.phi_complete_through;
  j["terms"] = r.terms;
  return {j, r.certified ? kOk : kUncertified};
}

Report cmd_hankel(const MahlerSystem& sys, const Options& o) {
  const int terms = o.terms > 0 ? o.terms : 2 * o.n_max + std::max(0, sys.top() + 1) + 8;
  const LaurentSeries f = solve_mahler(sys, terms);
  const HankelReport h = hankel_dets(f, o.n_max, o.jobs);
  ordered vals = ordered::array();
  for (const Rat& v : h.values) vals.push_back(str(v));
  ordered j{{"n_range", ordered::array({h.n_min, h.n_max})}, {"values", vals}, {"nonzero", h.nonzero}, {"support", h.support()}};
  // Cross-check against the CF engine where it certifies.
  const CfExpansion cf = cf_expand(f, o.n_max, feq_check(sys));
  const int through = std::min(o.n_max, cf.complete_through);
  std::vector<int> phi;
  for (int v : cf.phi) {
    if (v <= through) phi.push_back(v);
  }
  std::vector<int> sup;
  for (int v : h.support()) {
    if (v <= through) sup.push_back(v);
  }
  j["phi_checked_through"] = through;
  j["agrees_with_phi"] = phi == sup;
  return {j, kOk};
}

Report cmd_cyclo(const Options& o) {
  const auto& a = o.cyclo_args;
  auto num = [&](std::size_t i) -> std::int64_t {
    if (i >= a.size()) throw ParseError("cyclo: missing argument " + std::to_string(i + 1));
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(a[i], &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != a[i].size() || a[i].empty()) throw ParseError("cyclo: argument " + std::to_string(i + 1) + " is not an integer: '" + a[i] + "'");
    return v;
  };
  if (a.empty()) throw ParseError("cyclo: expected 'decompose n d', 'phi n' or 'reaches n d'");
  if (a[0] == "decompose") {
    const auto n = num(1);
    const auto d = num(2);
    const auto idx = decompose_cyclo_power(n, d);
    std::int64_t deg = 0;
    for (auto i : idx) deg += totient(i);
    return {ordered{{"n", n}, {"d", d}, {"indices", idx}, {"degree", deg}, {"expected_degree", d * totient(n)}}, kOk};
  }
  if (a[0] == "phi") {
    const auto n = num(1);
    return {ordered{{"n", n}, {"totient", totient(n)}, {"poly", poly_json(cyclotomic_poly(n))}}, kOk};
  }
  if (a[0] == "reaches") {
    const auto n = num(1);
    const auto d = num(2);
    const auto m = reaches(n, d);
    return {ordered{{"n", n}, {"d", d}, {"m", m ? ordered(*m) : ordered(nullptr)}}, kOk};
  }
  throw ParseError("cyclo: unknown action '" + a[0] + "'");
}

std::pair<int, int> parse_depth(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma != std::string::npos) {
      std::size_t p1 = 0;
      std::size_t p2 = 0;
      const int k = std::stoi(s.substr(0, comma), &p1);
      const int m = std::stoi(s.substr(comma + 1), &p2);
      if (p1 == comma && p2 == s.size() - comma - 1 && k >= 1 && m >= 0) return {k, m};
    }
  } catch (const std::exception&) {
  }
  throw ParseError("--depth expects k_max,m_max with k_max >= 1, m_max >= 0, got '" + s + "'");
}

Report cmd_verify(const MahlerSystem& sys, const Options& o) {
  const auto [k_max, m_max] = parse_depth(o.depth);
  Approximations ctx(sys, o.bits);
  const ValueEstimate& v = ctx.value();
  const EmpiricalMu e = ctx.empirical_mu(k_max, m_max);
  ordered grid = ordered::array();
  for (const ApproxPair& p : e.grid) {
    ordered row{{"k", p.k}, {"m", p.m}, {"q_bits", mpz_sizeinbase(p.q_reduced.get_mpz_t(), 2)}, {"resolved", p.resolved}, {"exact_hit", p.exact_hit}};
    row["local_exponent"] = p.resolved ? interval_json(p.local_exponent) : ordered(nullptr);
    grid.push_back(row);
  }
  ordered lem = ordered::array();
  bool all_pass = true;
  const int m_lo = std::min(1, m_max);
  for (int k = 1; k <= k_max; ++k) {
    if (ctx.rational() && k >= ctx.convergent_count()) break;
    const RatioReport r = ctx.lemma4(k, m_lo, m_max);
    all_pass = all_pass && r.pass;
    lem.push_back(ordered{{"k", r.k},
                          {"d_k", r.d_k},
                          {"d_next", r.d_next},
                          {"ratio_q", ordered::array({r.min_ratio_q, r.max_ratio_q})},
                          {"ratio_err", ordered::array({r.min_ratio_err, r.max_ratio_err})},
                          {"drift_q", r.drift_q},
                          {"drift_err", r.drift_err},
                          {"vacuous", r.vacuous},
                          {"result", r.pass ? "PASS" : "FAIL"}});
  }
  ordered j;
  j["bits"] = o.bits;
  j["value"] = interval_json(v.value);
  j["value_method"] = v.method;
  j["empirical_mu"] = e.value ? interval_json(*e.value) : ordered(nullptr);
  j["empirical_mu_at"] = ordered{{"k", e.best_k}, {"m", e.best_m}};
  j["grid_max"] = e.grid_max ? interval_json(*e.grid_max) : ordered(nullptr);
  j["rational_suspected"] = e.rational_suspected;
  j["grid"] = grid;
  j["lemma4"] = lem;
  return {j, all_pass ? kOk : kUncertified};
}

std::string verify_csv(const ordered& body) {
  std::ostringstream s;
  s << "k,m,q_bits,resolved,exact_hit,local_exponent_lo,local_exponent_hi\n";
  for (const auto& r : body.at("grid")) {
    s << r["k"].get<int>() << "," << r["m"].get<int>() << "," << r["q_bits"].dump() << "," << r["resolved"].dump() << ","
      << r["exact_hit"].dump() << ",";
    if (r["local_exponent"].is_null()) {
      s << ",\n";
    } else {
      s << r["local_exponent"]["lo"].get<std::string>() << "," << r["local_exponent"]["hi"].get<std::string>() << "\n";
    }
  }
  return s.str();
}

Report dispatch(const std::string& cmd, const MahlerSystem& sys, const Options& o) {
  if (cmd == "series") return cmd_series(sys, o);
  if (cmd == "cf") return cmd_cf(sys, o);
  if (cmd == "phi") return cmd_phi(sys, o);
  if (cmd == "gaps") return cmd_gaps(sys, o);
  if (cmd == "exponent") return cmd_exponent(sys, o);
  if (cmd == "hankel") return cmd_hankel(sys, o);
  if (cmd == "verify") return cmd_verify(sys, o);
  throw Error("unknown command " + cmd);
}

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const NoLaurentSolution*>(&e)) return "NoLaurentSolution";
  if (dynamic_cast<const DegenerateSystem*>(&e)) return "DegenerateSystem";
  if (dynamic_cast<const HypothesisViolated*>(&e)) return "HypothesisViolated";
  if (dynamic_cast<const InsufficientPrecision*>(&e)) return "InsufficientPrecision";
  if (dynamic_cast<const DegreeCapped*>(&e)) return "DegreeCapped";
  if (dynamic_cast<const CapExceeded*>(&e)) return "CapExceeded";
  return "Error";
}

}  // namespace

MahlerSystem parse_system(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("system JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("system JSON must be an object");
  const Poly A = poly_field(j, "A");
  const Poly B = poly_field(j, "B");
  if (!j.contains("d") || !j["d"].is_number_integer()) throw ParseError("field \"d\" must be an integer");
  const long long d = j["d"].get<long long>();
  if (d < 2 || d > (1 << 20)) throw DegenerateSystem("d must be in [2, 2^20], got " + std::to_string(d));
  std::optional<Integer> b;
  if (j.contains("b") && !j["b"].is_null()) b = integer_field(j["b"], "b");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "A" && it.key() != "B" && it.key() != "d" && it.key() != "b") throw ParseError("unknown field \"" + it.key() + "\"");
  }
  return MahlerSystem(A, B, static_cast<int>(d), b);
}

std::string system_json(const MahlerSystem& sys) { return system_obj(sys).dump(); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact irrationality exponents of Mahler numbers f(b), f(z) = A(z)/B(z) f(z^d)", "mahler"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto common = [&o](CLI::App* s) {
    s->add_option("--preset", o.presets, "family_a:s, family_b:s or family_c:+/- (repeatable)");
    s->add_option("--input", o.input, "System JSON file {\"A\": [...], \"B\": [...], \"d\": d, \"b\": b}")->check(CLI::ExistingFile);
    s->add_option("--system", o.system, "System as inline JSON");
    s->add_option("--b", o.b, "Evaluation point (default 2)");
    s->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text", "csv"}));
    s->add_option("--output,-o", o.output, "Write the report to this file");
    s->add_flag("--no-meta", o.no_meta, "Omit the meta block (timestamp, version)");
    s->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1, 256));
    s->add_option("--terms", o.terms, "Series coefficients (default: automatic)")->check(CLI::NonNegativeNumber);
    s->add_option("--max-terms", o.max_terms, "Precision budget for adaptive expansion")->check(CLI::PositiveNumber);
  };

  CLI::App* series = app.add_subcommand("series", "Laurent expansion of f");
  common(series);
  CLI::App* cf = app.add_subcommand("cf", "Continued fraction of f");
  common(cf);
  cf->add_option("--max-degree", o.max_degree, "Largest denominator degree")->check(CLI::PositiveNumber);
  CLI::App* phi = app.add_subcommand("phi", "Certified denominator degrees");
  common(phi);
  phi->add_option("--up-to", o.up_to, "Largest degree")->check(CLI::PositiveNumber);
  CLI::App* gaps = app.add_subcommand("gaps", "Big and primitive gaps of Phi");
  common(gaps);
  gaps->add_option("--scan", o.scan, "Scan limit")->check(CLI::PositiveNumber);
  gaps->add_option("--degree-cap", o.degree_cap, "Polynomial degree cap")->check(CLI::PositiveNumber);
  CLI::App* expo = app.add_subcommand("exponent", "Exact irrationality exponent");
  common(expo);
  expo->add_option("--horizon", o.horizon, "Orbit steps")->check(CLI::PositiveNumber);
  expo->add_option("--degree-cap", o.degree_cap, "Polynomial degree cap")->check(CLI::PositiveNumber);
  expo->add_option("--phi-floor", o.phi_floor, "Minimum Phi scan limit")->check(CLI::NonNegativeNumber);
  CLI::App* hankel = app.add_subcommand("hankel", "Hankel determinants of the coefficients");
  common(hankel);
  hankel->add_option("--n-max", o.n_max, "Largest order")->check(CLI::PositiveNumber);
  CLI::App* cyclo = app.add_subcommand("cyclo", "Cyclotomic tools: decompose n d | phi n | reaches n d");
  cyclo->add_option("args", o.cyclo_args, "Action and arguments");
  cyclo->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  cyclo->add_option("--output,-o", o.output, "Write the report to this file");
  cyclo->add_flag("--no-meta", o.no_meta, "Omit the meta block");
  cyclo->allow_extras(false);
  CLI::App* verify = app.add_subcommand("verify", "Numerical corroboration at b");
  common(verify);
  verify->add_option("--bits", o.bits, "Working precision")->check(CLI::Range(16, 1 << 20));
  verify->add_option("--depth", o.depth, "k_max,m_max");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  if (o.format == "csv" && cmd != "verify") {
    err << "mahler: --format csv is only available for verify\n";
    return kError;
  }

  const auto t0 = std::chrono::steady_clock::now();
  ordered report;
  int status = kOk;
  try {
    if (cmd == "cyclo") {
      Report r = cmd_cyclo(o);
      report = std::move(r.body);
      status = r.status;
    } else {
      const std::vector<MahlerSystem> syss = systems(o);
      std::vector<Report> results(syss.size());
      std::vector<std::string> errors(syss.size());
      auto one = [&](std::size_t i) {
        try {
          results[i] = dispatch(cmd, syss[i], o);
        } catch (const std::exception& e) {
          if (syss.size() == 1) throw;
          errors[i] = std::string(error_kind(e)) + ": " + e.what();
          results[i].status = kError;
        }
      };
      if (o.jobs > 1 && syss.size() > 1) {
        // Parameter sweeps: independent systems in parallel, orbits sequential.
        Options inner = o;
        inner.jobs = 1;
        for (std::size_t start = 0; start < syss.size(); start += static_cast<std::size_t>(o.jobs)) {
          std::vector<std::future<void>> fs;
          for (std::size_t i = start; i < std::min(syss.size(), start + static_cast<std::size_t>(o.jobs)); ++i) {
            fs.push_back(std::async(std::launch::async, [&, i] {
              try {
                results[i] = dispatch(cmd, syss[i], inner);
              } catch (const std::exception& e) {
                errors[i] = std::string(error_kind(e)) + ": " + e.what();
                results[i].status = kError;
              }
            }));
          }
          for (auto& f : fs) f.get();
        }
      } else {
        for (std::size_t i = 0; i < syss.size(); ++i) one(i);
      }
      auto wrap = [&](std::size_t i) {
        ordered body;
        body["system"] = system_obj(syss[i]);
        if (!errors[i].empty()) {
          body["error"] = errors[i];
        } else {
          for (auto it = results[i].body.begin(); it != results[i].body.end(); ++it) body[it.key()] = it.value();
        }
        return body;
      };
      if (syss.size() == 1) {
        report = wrap(0);
        status = results[0].status;
      } else {
        ordered arr = ordered::array();
        for (std::size_t i = 0; i < syss.size(); ++i) {
          arr.push_back(wrap(i));
          status = std::max(status, results[i].status == kError ? kError : results[i].status);
        }
        if (status == kUncertified && std::any_of(results.begin(), results.end(), [](const Report& r) { return r.status == kError; })) {
          status = kError;
        }
        report = ordered{{"results", arr}};
      }
    }
  } catch (const std::exception& e) {
    ordered ej{{"error", e.what()}, {"kind", error_kind(e)}};
    err << "mahler: " << ej.dump() << "\n";
    return kError;
  }

  ordered full{{"command", cmd}};
  for (auto it = report.begin(); it != report.end(); ++it) full[it.key()] = it.value();
  if (!o.no_meta) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    full["meta"] = ordered{{"tool", "mahler"}, {"version", kVersion}, {"timestamp", timestamp()}, {"seconds", secs}};
  }

  std::string text;
  if (o.format == "json") {
    text = full.dump(2) + "\n";
  } else if (o.format == "csv") {
    if (full.contains("results")) {
      err << "mahler: --format csv takes a single system\n";
      return kError;
    }
    text = verify_csv(full);
  } else {
    std::ostringstream s;
    render_text(full, "", s);
    text = s.str();
  }
  if (!o.output.empty()) {
    std::ofstream f(o.output);
    if (!f) {
      err << "mahler: cannot write " << o.output << "\n";
      return kError;
    }
    f << text;
  } else {
    out << text;
  }
  return status;
}

}  // namespace mahler::cli

#include "mahler/gaps.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <future>
#include <numeric>
#include <set>
#include <string>

#include "mahler/cyclotomic.hpp"
#include "mahler/errors.hpp"

namespace mahler {

namespace {

Poly mod(const Poly& a, const Poly& m) { return divmod(a, m).remainder; }

// Q(z^d) mod M by Horner in t = z^d mod M, without forming Q(z^d).
Poly compose_power_mod(const Poly& Q, int d, const Poly& M) {
  if (M.degree() < 1) return Poly{};
  const Poly t = mod(Poly::monomial(Rat(1), static_cast<std::size_t>(d)), M);
  Poly acc;
  for (std::size_t i = Q.coeffs().size(); i-- > 0;) acc = mod(acc * t + Poly::constant(Q.coeffs()[i]), M);
  return acc;
}

// Arithmetic modulo the prime 2^61 - 1, used to certify trivial gcds
// cheaply: for a prime not dividing any denominator or the leading
// coefficients, deg gcd mod p bounds deg gcd over Q from above.
namespace modp {

using u64 = std::uint64_t;
__extension__ using u128 = unsigned __int128;
using Vec = std::vector<u64>;
constexpr u64 kP = (1ULL << 61) - 1;

u64 mul(u64 a, u64 b) { return static_cast<u64>((static_cast<u128>(a) * b) % kP); }
u64 add(u64 a, u64 b) { return (a + b) % kP; }
u64 sub(u64 a, u64 b) { return (a + kP - b) % kP; }
u64 power(u64 b, u64 e) {
  u64 r = 1;
  for (; e > 0; e >>= 1, b = mul(b, b)) {
    if (e & 1) r = mul(r, b);
  }
  return r;
}
u64 inv(u64 a) { return power(a, kP - 2); }

std::optional<u64> reduce(const Rat& x) {
  const u64 den = mpz_fdiv_ui(x.get_den_mpz_t(), kP);
  if (den == 0) return std::nullopt;
  const u64 num = mpz_fdiv_ui(x.get_num_mpz_t(), kP);
  return mul(num, inv(den));
}

void trim(Vec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::optional<Vec> reduce(const Poly& p) {
  Vec out(p.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto r = reduce(p.coeffs()[i]);
    if (!r) return std::nullopt;
    out[i] = *r;
  }
  if (!out.empty() && out.back() == 0) return std::nullopt;
  return out;
}

// a mod m, m monic-izable and nonzero.
void rem(Vec& a, const Vec& m) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const u64 li = inv(m.back());
  while (a.size() > dm && !a.empty()) {
    const u64 c = mul(a.back(), li);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = sub(a[shift + i], mul(c, m[i]));
    trim(a);
  }
}

Vec mulmod(const Vec& a, const Vec& b, const Vec& m) {
  if (a.empty() || b.empty()) return {};
  Vec out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = add(out[i + j], mul(a[i], b[j]));
  }
  rem(out, m);
  return out;
}

int gcd_degree(Vec a, Vec b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    rem(a, b);
    std::swap(a, b);
  }
  return static_cast<int>(a.size()) - 1;
}

// deg gcd(M, Q(z^d)) modulo p, or nullopt if the prime is unsuitable.
std::optional<int> composed_gcd_degree(const Poly& M, const Poly& Q, int d) {
  const auto m = reduce(M);
  const auto q = reduce(Q);
  if (!m || !q) return std::nullopt;
  Vec t(static_cast<std::size_t>(d) + 1, 0);
  t.back() = 1;
  rem(t, *m);
  Vec acc;
  for (std::size_t i = q->size(); i-- > 0;) {
    acc = mulmod(acc, t, *m);
    if (acc.empty()) acc.push_back(0);
    acc[0] = add(acc[0], (*q)[i]);
    trim(acc);
  }
  return gcd_degree(*m, acc);
}

}  // namespace modp

// gcd(M, Q(z^d)) over Q; the modular filter settles the common trivial case.
Poly composed_gcd(const Poly& M, const Poly& Q, int d) {
  if (M.degree() < 1) return Poly{1};
  const auto deg = modp::composed_gcd_degree(M, Q, d);
  if (deg && *deg == 0) return Poly{1};
  return gcd(M, compose_power_mod(Q, d, M));
}

Integer ipow(const Integer& b, int e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

Rat floor_rat(const Rat& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return Rat(q);
}

int ceil_int(const Rat& x) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return static_cast<int>(q.get_si());
}

Gap normalized_gap(int u, int v, Poly p, Poly q) {
  const Rat inv = 1 / q.lead();
  return Gap{u, v, p * inv, q * inv};
}

// Monic polynomial whose roots are the d-th powers of the roots of monic c,
// via power sums and Newton's identities.
Poly graeffe(const Poly& c, int d) {
  const int n = c.degree();
  const auto a = c.coeffs();
  const int kmax = n * d;
  std::vector<Rat> s(static_cast<std::size_t>(kmax) + 1);
  for (int k = 1; k <= kmax; ++k) {
    Rat acc = 0;
    if (k <= n) acc = Rat(k) * a[static_cast<std::size_t>(n - k)];
    for (int i = 1; i <= std::min(k - 1, n); ++i) acc += a[static_cast<std::size_t>(n - i)] * s[static_cast<std::size_t>(k - i)];
    s[static_cast<std::size_t>(k)] = -acc;
  }
  std::vector<Rat> b(static_cast<std::size_t>(n) + 1);
  b[static_cast<std::size_t>(n)] = 1;
  for (int k = 1; k <= n; ++k) {
    Rat acc = s[static_cast<std::size_t>(k * d)];
    for (int i = 1; i < k; ++i) acc += b[static_cast<std::size_t>(n - i)] * s[static_cast<std::size_t>((k - i) * d)];
    b[static_cast<std::size_t>(n - k)] = -acc / k;
  }
  return Poly(std::move(b));
}

// Every root of monic p has modulus < rho (Fujiwara: |z| <= 2 max |a_{n-k}|^{1/k}).
bool all_roots_inside(const Poly& p, const Rat& rho) {
  const int n = p.degree();
  const Rat half = rho / 2;
  Rat bound = 1;
  for (int k = 1; k <= n; ++k) {
    bound *= half;
    if (abs(p.coeffs()[static_cast<std::size_t>(n - k)]) >= bound) return false;
  }
  return true;
}

Poly reversed_monic(const Poly& p) {
  std::vector<Rat> r(p.coeffs().rbegin(), p.coeffs().rend());
  return Poly(std::move(r)).monic();
}

Poly strip_z_power(const Poly& p) {
  std::size_t k = 0;
  while (p.coeffs()[k] == 0) ++k;
  return Poly(std::vector<Rat>(p.coeffs().begin() + static_cast<std::ptrdiff_t>(k), p.coeffs().end()));
}

std::size_t bit_size(const Poly& p) {
  std::size_t bits = 0;
  for (const auto& c : p.coeffs()) bits += mpz_sizeinbase(c.get_num_mpz_t(), 2) + mpz_sizeinbase(c.get_den_mpz_t(), 2);
  return bits;
}

std::string gap_str(const Gap& g) { return "[" + std::to_string(g.u) + "," + std::to_string(g.v) + "]"; }

}  // namespace

bool is_big(const Gap& g, const MahlerSystem& sys) { return Rat(g.size()) > sys.big_gap_threshold(); }

int default_degree_cap() {
  if (const char* env = std::getenv("MAHLER_MU_DEGREE_CAP")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1L << 30) return static_cast<int>(v);
  }
  return 200000;
}

const char* to_string(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::PeriodDetected:
      return "PeriodDetected";
    case OrbitStatus::HorizonExhausted:
      return "HorizonExhausted";
    case OrbitStatus::DegreeCapped:
      return "DegreeCapped";
  }
  return "?";
}

std::vector<Gap> find_big_gaps(const CfExpansion& cf, const MahlerSystem& sys, int scan_limit) {
  if (cf.complete_through < scan_limit) {
    throw InsufficientPrecision("find_big_gaps: Phi certified only through " + std::to_string(cf.complete_through) +
                                ", scan limit " + std::to_string(scan_limit));
  }
  std::vector<Gap> out;
  for (std::size_t i = 0; i + 1 < cf.phi.size(); ++i) {
    const int u = cf.phi[i];
    const int v = cf.phi[i + 1];
    if (v > scan_limit) break;
    if (!(Rat(v - u) > sys.big_gap_threshold())) continue;
    const Convergent* c = cf.by_degree(u);
    if (c == nullptr || !c->certified || c->next_degree != v) {
      throw InsufficientPrecision("find_big_gaps: no certified convergent of degree " + std::to_string(u));
    }
    out.push_back(Gap{u, v, c->p, c->q});
  }
  return out;
}

Evolution evolve_gap(const Gap& g, const MahlerSystem& sys, int degree_cap) {
  const int d = sys.d();
  if (static_cast<long long>(g.u) * d > degree_cap) {
    throw DegreeCapped("evolving " + gap_str(g) + " needs degree " + std::to_string(static_cast<long long>(g.u) * d) +
                       " > cap " + std::to_string(degree_cap));
  }
  // gcd(A, B) = gcd(p, q) = 1 splits the gcd into an A-part and a B-part,
  // each computed modulo the small polynomial: C1 = gcd(A, q(z^d)), C2 = gcd(B, p(z^d)).
  const Poly C1 = composed_gcd(sys.A(), g.q, d);
  const Poly C2 = composed_gcd(sys.B(), g.p, d);
  const int r_c = C1.degree() + C2.degree();

  const auto du = static_cast<unsigned long>(d);
  Poly pd = substitute_power(g.p, du);
  Poly qd = substitute_power(g.q, du);
  if (C2.degree() > 0) pd = exact_div(pd, C2);
  if (C1.degree() > 0) qd = exact_div(qd, C1);
  const Poly a = C1.degree() > 0 ? exact_div(sys.A(), C1) : sys.A();
  const Poly b = C2.degree() > 0 ? exact_div(sys.B(), C2) : sys.B();

  const int u2 = d * g.u + sys.rb() - r_c;
  const int v2 = d * g.v - sys.ra() + r_c;
  Gap next = normalized_gap(u2, v2, a * pd, b * qd);
  if (next.q.degree() != u2) throw Error("evolve_gap: internal error, successor degree mismatch at " + gap_str(g));
  if (is_big(g, sys) && next.size() <= g.size()) {
    throw Error("evolve_gap: successor of " + gap_str(g) + " is not larger");
  }
  return {std::move(next), r_c};
}

Evolution evolve_gap_reference(const Gap& g, const MahlerSystem& sys) {
  const auto du = static_cast<unsigned long>(sys.d());
  const Poly num = sys.A() * substitute_power(g.p, du);
  const Poly den = sys.B() * substitute_power(g.q, du);
  const Poly C = gcd(num, den);
  const int r_c = C.degree();
  const int u2 = sys.d() * g.u + sys.rb() - r_c;
  const int v2 = sys.d() * g.v - sys.ra() + r_c;
  return {normalized_gap(u2, v2, exact_div(num, C), exact_div(den, C)), r_c};
}

std::vector<Gap> find_primitive_gaps(const std::vector<Gap>& big, const MahlerSystem& sys, int degree_cap) {
  std::set<std::pair<int, int>> generated;
  for (const Gap& g : big) {
    try {
      const Evolution e = evolve_gap(g, sys, degree_cap);
      generated.emplace(e.next.u, e.next.v);
    } catch (const DegreeCapped&) {
      // Its successor lies far beyond any listed gap.
    }
  }
  std::vector<Gap> out;
  for (const Gap& g : big) {
    if (generated.count({g.u, g.v}) == 0) out.push_back(g);
  }
  return out;
}

std::optional<PeriodFit> detect_period(const std::vector<int>& seq, int window_min) {
  const int len = static_cast<int>(seq.size());
  for (int P = 1; 2 * std::max(P, window_min) <= len; ++P) {
    for (int n0 = 0; len - n0 >= 2 * std::max(P, window_min); ++n0) {
      bool ok = true;
      for (int n = n0; n + P < len && ok; ++n) ok = seq[static_cast<std::size_t>(n)] == seq[static_cast<std::size_t>(n + P)];
      if (ok) return PeriodFit{n0, P};
    }
  }
  return std::nullopt;
}

std::optional<Rat> GapOrbit::limit() const {
  if (phase_limits.empty()) return std::nullopt;
  return *std::max_element(phase_limits.begin(), phase_limits.end());
}

GapOrbit orbit(const Gap& g, const MahlerSystem& sys, const OrbitConfig& cfg) {
  GapOrbit o;
  o.origin = g;
  o.steps.push_back({g.u, g.v, std::nullopt});
  Gap cur = g;
  std::vector<int> rc;
  o.status = OrbitStatus::HorizonExhausted;
  for (int n = 0; n < cfg.horizon; ++n) {
    Evolution e;
    try {
      e = evolve_gap(cur, sys, cfg.degree_cap);
    } catch (const DegreeCapped&) {
      o.status = OrbitStatus::DegreeCapped;
      break;
    }
    if (e.r_c < 0 || e.r_c > sys.ra() + sys.rb()) throw Error("orbit: r_c out of range at " + gap_str(cur));
    o.steps.back().r_c = e.r_c;
    rc.push_back(e.r_c);
    o.steps.push_back({e.next.u, e.next.v, std::nullopt});
    cur = std::move(e.next);
  }

  const bool all_zero = std::all_of(rc.begin(), rc.end(), [](int x) { return x == 0; });
  if (all_zero) o.witness = orbit_coprimality(sys, g.p, g.q);

  std::optional<PeriodFit> fit;
  if (o.witness.proven) {
    fit = PeriodFit{0, 1};
  } else if (!o.witness.refuted) {
    fit = detect_period(rc, cfg.window_min);
  }
  if (!fit) return o;

  o.status = OrbitStatus::PeriodDetected;
  o.n0 = fit->n0;
  o.period = fit->period;
  const int P = fit->period;
  const Integer d(sys.d());
  const Integer dP = ipow(d, P);
  Integer geom = 0;
  for (int j = 0; j < P; ++j) geom += ipow(d, j);
  // The r_c sequence is periodic from n0 on, so rc at index n for n >= n0 is rc[n0 + (n - n0) % P].
  auto rc_at = [&](int n) { return n < static_cast<int>(rc.size()) ? rc[static_cast<std::size_t>(n)] : (o.witness.proven ? 0 : rc[static_cast<std::size_t>(fit->n0 + (n - fit->n0) % P)]); };
  for (int i = 0; i < P; ++i) {
    const int n = fit->n0 + i;
    Integer R = 0;
    for (int j = 0; j < P; ++j) R += ipow(d, P - 1 - j) * rc_at(n + j);
    const Integer ru = Integer(sys.rb()) * geom - R;
    const Integer rv = Integer(sys.ra()) * geom - R;
    if (i == 0) {
      o.R = R;
      o.r_u = ru;
      o.r_v = rv;
    }
    const Rat denom(dP - 1);
    const OrbitStep& st = o.steps[static_cast<std::size_t>(n)];
    o.phase_limits.push_back((Rat(st.v) - Rat(rv) / denom) / (Rat(st.u) + Rat(ru) / denom));
  }
  return o;
}

CoprimalityWitness coprime_under_iteration(const Poly& C, const Poly& D, int d) {
  if (C.is_zero() || D.is_zero()) throw Error("coprime_under_iteration: zero polynomial");
  if (C.degree() < 1 || D.degree() < 1) return {true, false, "constant"};
  const CyclotomicSplit cs = split_cyclotomic(C);
  const bool d_zero_root = D.coeffs()[0] == 0;
  if (cs.z_power > 0 && d_zero_root) return {false, true, "z divides both"};
  for (const auto& f : cs.factors) {
    // A primitive n-th root of unity raised to d^m has order n / gcd(n, d^m).
    std::int64_t k = f.index;
    for (;;) {
      const std::int64_t next = k / std::gcd(k, static_cast<std::int64_t>(d));
      k = next;
      if (sigma_multiplicity(k, D) > 0) {
        return {false, true, "Phi_" + std::to_string(f.index) + " maps onto Phi_" + std::to_string(k)};
      }
      if (std::gcd(k, static_cast<std::int64_t>(d)) == 1) break;
    }
  }
  Poly cur = cs.rest.monic();
  if (cur.degree() < 1) return {true, false, "cyclotomic and monomial parts only"};
  const Poly dn = strip_z_power(D);
  if (dn.degree() < 1) return {true, false, "D has no nonzero roots"};
  const Rat T = std::max(Rat(1), cauchy_root_bound(dn));
  const Rat rho = std::min(Rat(1), Rat(1 / cauchy_root_bound(reversed_monic(dn))));
  const Poly Dm = dn.monic();
  constexpr int kMaxIter = 24;
  constexpr std::size_t kMaxBits = 1u << 22;
  for (int m = 1; m <= kMaxIter; ++m) {
    cur = graeffe(cur, d);
    if (gcd(cur, Dm).degree() > 0) return {false, true, "common root after " + std::to_string(m) + " iterations"};
    if (all_roots_inside(reversed_monic(cur), 1 / T)) {
      return {true, false, "roots leave the disc |z| <= " + to_string(T) + " after " + std::to_string(m) + " iterations"};
    }
    if (all_roots_inside(cur, rho)) {
      return {true, false, "roots enter the disc |z| < " + to_string(rho) + " after " + std::to_string(m) + " iterations"};
    }
    if (bit_size(cur) > kMaxBits) break;
  }
  return {false, false, "root moduli not separated"};
}

CoprimalityWitness orbit_coprimality(const MahlerSystem& sys, const Poly& p, const Poly& q) {
  const int d = sys.d();
  const std::pair<const char*, std::pair<const Poly*, const Poly*>> pairs[] = {
      {"(A,B)", {&sys.A(), &sys.B()}},
      {"(A,q)", {&sys.A(), &q}},
      {"(B,A)", {&sys.B(), &sys.A()}},
      {"(B,p)", {&sys.B(), &p}},
  };
  CoprimalityWitness all{true, false, ""};
  for (const auto& [name, pr] : pairs) {
    const CoprimalityWitness w = coprime_under_iteration(*pr.first, *pr.second, d);
    if (!all.detail.empty()) all.detail += "; ";
    all.detail += std::string(name) + ": " + w.detail;
    if (w.refuted) all.refuted = true;
    if (!w.proven) all.proven = false;
  }
  return all;
}

Rat primitive_size_bound(const MahlerSystem& sys) {
  return make_rat(Integer(2 * sys.d() - 1) * (sys.ra() + sys.rb()), Integer(sys.d() - 1));
}

std::optional<int> pruning_bound(int u0, int v0, int S, const MahlerSystem& sys) {
  const Rat a = sys.ra_shift();
  const Rat b = sys.rb_shift();
  const Rat R = (Rat(v0) - a) / (Rat(u0) + b);
  if (R <= 1) return std::nullopt;
  // (u + S + b) / (u - a) > R  <=>  u < (S + b + R a) / (R - 1)
  const Rat X = (Rat(S) + b + R * a) / (R - 1);
  return ceil_int(X) - 1;
}

DirectRho direct_rho_estimate(const std::vector<int>& phi, int skip) {
  if (skip < 0 || phi.size() < static_cast<std::size_t>(skip) + 2) {
    throw Error("direct_rho_estimate: need at least " + std::to_string(skip + 2) + " elements");
  }
  DirectRho best{Rat(0), 0, 0};
  for (std::size_t k = static_cast<std::size_t>(skip); k + 1 < phi.size(); ++k) {
    const Rat r = make_rat(phi[k + 1], phi[k]);
    if (r > best.ratio) best = {r, phi[k], phi[k + 1]};
  }
  return best;
}

std::vector<OrbitStep> orbit_phi_mismatches(const GapOrbit& o, const std::vector<int>& phi, int limit) {
  std::vector<OrbitStep> bad;
  for (const OrbitStep& st : o.steps) {
    if (st.v > limit) continue;
    const auto it = std::lower_bound(phi.begin(), phi.end(), st.u);
    const bool ok = it != phi.end() && *it == st.u && it + 1 != phi.end() && *(it + 1) == st.v;
    if (!ok) bad.push_back(st);
  }
  return bad;
}

ExponentResult exponent(const MahlerSystem& sys, const ExponentConfig& cfg) {
  ExponentResult res;
  const RationalityCheck check = [&sys](const Poly& p, const Poly& q) { return satisfies_functional_equation(sys, p, q); };
  const Rat bound = primitive_size_bound(sys);
  const int S = static_cast<int>(floor_rat(bound).get_num().get_si());
  const int bound_ceil = ceil_int(bound);
  const int head = std::max(0, sys.top() + 1);

  int scan = std::max(cfg.phi_floor, 2 * bound_ceil + 8);
  int terms = 2 * scan + 16 + head;
  CfExpansion cf;
  std::optional<PruningRecord> pruning;
  bool precision_ok = true;
  for (;;) {
    const LaurentSeries f = solve_mahler(sys, terms);
    cf = cf_expand(f, scan, check);
    res.terms = terms;
    if (cf.is_rational) {
      res.verdict = Verdict::RationalFunction;
      res.p = cf.convergents.back().p;
      res.q = cf.convergents.back().q;
      res.certified = true;
      res.phi = cf.phi;
      res.phi_complete_through = cf.complete_through;
      return res;
    }
    if (cf.complete_through < scan) {
      if (terms * 2 > cfg.max_terms) {
        precision_ok = false;
        scan = cf.complete_through;
        break;
      }
      terms *= 2;
      continue;
    }
    res.big_gaps = find_big_gaps(cf, sys, scan);
    res.primitive_gaps = find_primitive_gaps(res.big_gaps, sys, cfg.orbit.degree_cap);
    if (res.primitive_gaps.empty()) break;

    // Pivot: largest size, then smallest u; evolved until (d-1)u > r_a.
    Gap pivot = res.primitive_gaps.front();
    for (const Gap& g : res.primitive_gaps) {
      if (g.size() > pivot.size() || (g.size() == pivot.size() && g.u < pivot.u)) pivot = g;
    }
    const int largest = pivot.size();
    bool pivot_ok = true;
    while ((sys.d() - 1) * pivot.u <= sys.ra()) {
      try {
        pivot = evolve_gap(pivot, sys, cfg.orbit.degree_cap).next;
      } catch (const DegreeCapped&) {
        pivot_ok = false;
        break;
      }
    }
    PruningRecord pr;
    pr.S = S;
    pr.max_primitive_size = largest;
    pr.size_bound = bound;
    pr.pivot = pivot;
    pr.pivot_lower_bound = (Rat(pivot.v) - sys.ra_shift()) / (Rat(pivot.u) + sys.rb_shift());
    const std::optional<int> lu = pivot_ok ? pruning_bound(pivot.u, pivot.v, S, sys) : std::nullopt;
    if (!lu) {
      pr.l_u = -1;
      pr.phi_scan_limit = scan;
      pruning = pr;
      break;
    }
    pr.l_u = *lu;
    pr.phi_scan_limit = *lu + bound_ceil + 5;
    pruning = pr;
    if (pr.phi_scan_limit <= scan) break;
    scan = pr.phi_scan_limit;
    terms = std::max(terms, 2 * scan + 16 + head);
  }

  res.phi = cf.phi;
  res.phi_complete_through = cf.complete_through;
  res.pruning = pruning;
  if (!precision_ok) res.caveats.push_back("precision budget exhausted; Phi certified only through " + std::to_string(cf.complete_through));
  if (sys.b() && !sys.hypothesis_holds()) res.caveats.push_back("A(b^{d^m}) B(b^{d^m}) vanishes for some m");

  if (res.primitive_gaps.empty()) {
    res.mu = 2;
    res.rho = 1;
    res.certified = false;
    res.caveats.push_back("no big gaps up to " + std::to_string(scan));
    return res;
  }
  if (!pruning || pruning->l_u < 0) {
    res.caveats.push_back("pruning bound unavailable: pivot lower bound does not exceed 1");
  }

  std::vector<Gap> work;
  for (const Gap& g : res.primitive_gaps) {
    if (!pruning || pruning->l_u < 0 || g.u <= pruning->l_u) work.push_back(g);
  }
  res.orbits.resize(work.size());
  if (cfg.jobs > 1 && work.size() > 1) {
    std::vector<std::future<GapOrbit>> futs;
    std::size_t next = 0;
    while (next < work.size()) {
      futs.clear();
      const std::size_t batch_start = next;
      for (int j = 0; j < cfg.jobs && next < work.size(); ++j, ++next) {
        futs.push_back(std::async(std::launch::async, [&, next] { return orbit(work[next], sys, cfg.orbit); }));
      }
      for (std::size_t j = 0; j < futs.size(); ++j) res.orbits[batch_start + j] = futs[j].get();
    }
  } else {
    for (std::size_t i = 0; i < work.size(); ++i) res.orbits[i] = orbit(work[i], sys, cfg.orbit);
  }

  bool all_periodic = true;
  bool consistent = true;
  Rat best = 1;
  for (std::size_t i = 0; i < res.orbits.size(); ++i) {
    const GapOrbit& o = res.orbits[i];
    const std::string name = gap_str(o.origin);
    if (o.status != OrbitStatus::PeriodDetected) {
      all_periodic = false;
      res.caveats.push_back("orbit of " + name + " ended with " + to_string(o.status) + " before a period was found");
      continue;
    }
    if (!o.witness.proven) {
      res.caveats.push_back("period of r_c along " + name + " detected empirically (n0=" + std::to_string(*o.n0) +
                            ", P=" + std::to_string(*o.period) + ")");
    }
    if (!orbit_phi_mismatches(o, cf.phi, cf.complete_through).empty()) {
      consistent = false;
      res.caveats.push_back("orbit of " + name + " disagrees with the certified Phi prefix");
    }
    const Rat lim = *o.limit();
    if (lim > best) {
      best = lim;
      res.witness = i;
    }
  }
  res.rho = best;
  res.mu = 1 + best;
  res.certified = precision_ok && all_periodic && consistent && pruning && pruning->l_u >= 0 &&
                  cf.complete_through >= pruning->phi_scan_limit && !(sys.b() && !sys.hypothesis_holds());
  return res;
}

}  // namespace mahler

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mahler/contfrac.hpp"
#include "mahler/laurent.hpp"

namespace mahler {

/// Consecutive elements u < v of Phi together with the convergent of degree u.
struct Gap {
  int u = 0;
  int v = 0;
  Poly p;
  Poly q;

  [[nodiscard]] int size() const { return v - u; }
  friend bool operator==(const Gap& a, const Gap& b) { return a.u == b.u && a.v == b.v; }
};

[[nodiscard]] bool is_big(const Gap& g, const MahlerSystem& sys);

/// Default cap on deg q_u(z^d); MAHLER_MU_DEGREE_CAP overrides it.
int default_degree_cap();

/// All big gaps [u, v] of cf.phi with v <= scan_limit. Throws
/// InsufficientPrecision if cf is not complete through scan_limit.
std::vector<Gap> find_big_gaps(const CfExpansion& cf, const MahlerSystem& sys, int scan_limit);

struct Evolution {
  Gap next;
  /// deg gcd(A p_u(z^d), B q_u(z^d)).
  int r_c = 0;
};

/// The gap generated by a big gap. Throws DegreeCapped if d * u exceeds degree_cap.
Evolution evolve_gap(const Gap& g, const MahlerSystem& sys, int degree_cap = default_degree_cap());

/// Same result as evolve_gap, computed with a full polynomial gcd. Used as a
/// cross-check of the factorized fast path.
Evolution evolve_gap_reference(const Gap& g, const MahlerSystem& sys);

/// Big gaps that are not the evolution of a smaller listed big gap.
std::vector<Gap> find_primitive_gaps(const std::vector<Gap>& big, const MahlerSystem& sys,
                                     int degree_cap = default_degree_cap());

struct OrbitStep {
  int u = 0;
  int v = 0;
  /// Cancellation on the way to the next step; unset on the last step.
  std::optional<int> r_c;
};

enum class OrbitStatus { PeriodDetected, HorizonExhausted, DegreeCapped };
[[nodiscard]] const char* to_string(OrbitStatus s);

/// Exact proof, when available, that r_c vanishes at every step.
struct CoprimalityWitness {
  bool proven = false;
  /// A common factor was found, so r_c does become positive.
  bool refuted = false;
  std::string detail;
};

struct GapOrbit {
  Gap origin;
  std::vector<OrbitStep> steps;
  OrbitStatus status = OrbitStatus::HorizonExhausted;
  std::optional<int> n0;
  std::optional<int> period;
  Integer R;
  Integer r_u;
  Integer r_v;
  /// Limit of v_n / u_n along each residue class n = n0 + i (mod P).
  std::vector<Rat> phase_limits;
  CoprimalityWitness witness;

  [[nodiscard]] std::optional<Rat> limit() const;
};

struct OrbitConfig {
  int horizon = 10;
  int degree_cap = default_degree_cap();
  int window_min = 3;
};

GapOrbit orbit(const Gap& g, const MahlerSystem& sys, const OrbitConfig& cfg = {});

/// Smallest period P, then smallest preperiod n0, such that seq[n] = seq[n + P]
/// for n0 <= n < size - P and size - n0 >= 2 max(P, window_min).
struct PeriodFit {
  int n0 = 0;
  int period = 1;
};
std::optional<PeriodFit> detect_period(const std::vector<int>& seq, int window_min);

/// Whether gcd(C(z), D(z^{d^m})) = 1 for every m >= 1, decided exactly or
/// reported as unavailable.
CoprimalityWitness coprime_under_iteration(const Poly& C, const Poly& D, int d);

/// Certificate that r_c stays 0 along the orbit of a gap with convergent p/q.
CoprimalityWitness orbit_coprimality(const MahlerSystem& sys, const Poly& p, const Poly& q);

/// (2d - 1)/(d - 1) * (r_a + r_b): no primitive gap is larger.
Rat primitive_size_bound(const MahlerSystem& sys);

struct PruningRecord {
  /// Size bound used in the pruning inequality: floor of primitive_size_bound.
  int S = 0;
  /// Largest primitive gap size actually found.
  int max_primitive_size = 0;
  Rat size_bound;
  /// Primitive gaps with u > l_u cannot raise the exponent.
  int l_u = 0;
  int phi_scan_limit = 0;
  /// Gap used for the lower bound, after evolving it until (d-1)u > r_a.
  Gap pivot;
  Rat pivot_lower_bound;
};

/// The largest u with (u + S + r_b/(d-1)) / (u - r_a/(d-1)) > (v0 - r_a/(d-1)) / (u0 + r_b/(d-1)).
/// Requires the right hand side to exceed 1; returns nullopt otherwise.
std::optional<int> pruning_bound(int u0, int v0, int S, const MahlerSystem& sys);

enum class Verdict { Exponent, RationalFunction };

struct ExponentConfig {
  OrbitConfig orbit;
  /// Minimum Phi scan limit.
  int phi_floor = 0;
  int max_terms = 1 << 14;
  /// Orbits run on up to this many threads.
  int jobs = 1;
};

struct ExponentResult {
  Verdict verdict = Verdict::Exponent;
  Rat mu;
  Rat rho;
  std::vector<Gap> big_gaps;
  std::vector<Gap> primitive_gaps;
  std::vector<GapOrbit> orbits;
  /// Index into orbits of the orbit attaining rho, if any.
  std::optional<std::size_t> witness;
  std::optional<PruningRecord> pruning;
  bool certified = false;
  std::vector<std::string> caveats;
  int terms = 0;
  int phi_complete_through = 0;
  std::vector<int> phi;
  /// f = p / q when the verdict is RationalFunction.
  Poly p;
  Poly q;
};

ExponentResult exponent(const MahlerSystem& sys, const ExponentConfig& cfg = {});

struct DirectRho {
  Rat ratio;
  int u = 0;
  int v = 0;
};

/// max phi[k+1]/phi[k] over k >= skip. Throws if fewer than skip + 2 elements.
DirectRho direct_rho_estimate(const std::vector<int>& phi, int skip = 1);

/// Orbit steps with v <= limit must be consecutive elements of phi. Returns
/// the offending steps.
std::vector<OrbitStep> orbit_phi_mismatches(const GapOrbit& o, const std::vector<int>& phi, int limit);

}  // namespace mahler

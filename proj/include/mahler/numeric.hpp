#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mahler/contfrac.hpp"
#include "mahler/interval.hpp"
#include "mahler/laurent.hpp"

namespace mahler {

inline constexpr int kGuardBits = 64;

/// |c_i| <= C K^i for every i >= 0, where f = sum c_i z^{top - i}. Proven
/// by induction on the coefficient recursion from the computed prefix.
struct CoefficientBound {
  Rat C;
  Rat K;
  /// From this index on the recursion itself propagates the bound.
  int i0 = 0;
};

/// Throws InsufficientPrecision if f has fewer than i0 coefficients.
CoefficientBound coefficient_bound(const MahlerSystem& sys, const LaurentSeries& f);

struct ValueEstimate {
  Interval value;
  /// Exact rational enclosure behind `value`.
  Rat lo;
  Rat hi;
  int bits = 0;
  /// Functional-equation iterations before the series is summed.
  int depth = 0;
  int terms = 0;
  std::string method;
};

/// f(b), enclosed to width <= 2^{-bits}. Throws HypothesisViolated if A or B
/// vanishes at some b^{d^t} used, Error if b is unset.
ValueEstimate eval_mahler_value(const MahlerSystem& sys, int bits);

struct ApproxPair {
  int k = 0;
  int m = 0;
  /// q_{k,m}(b) and p_{k,m}(b), exact.
  Rat q_val;
  Rat p_val;
  /// Integer numerator and denominator of p_val/q_val in lowest terms.
  Integer p_reduced;
  Integer q_reduced;
  /// |q_val f(b) - p_val|.
  Interval err;
  std::optional<Interval> err_product;
  std::optional<Interval> err_remainder;
  /// err excludes 0, so local_exponent is meaningful.
  bool resolved = false;
  /// p/q equals f(b) exactly.
  bool exact_hit = false;
  /// 1 + log(1/|q' f(b) - p'|) / log q' for the reduced fraction p'/q'.
  Interval local_exponent;
};

struct RatioRow {
  int m = 0;
  double log2_ratio_q = 0;
  double log2_ratio_err = 0;
};

struct RatioReport {
  int k = 0;
  int d_k = 0;
  int d_next = 0;
  double band_lo = 1e-6;
  double band_hi = 1e6;
  std::vector<RatioRow> rows;
  double min_ratio_q = 0, max_ratio_q = 0, min_ratio_err = 0, max_ratio_err = 0;
  /// (max - min) / max over the last quarter of the rows.
  double drift_q = 0;
  double drift_err = 0;
  bool in_band = false;
  bool stable = false;
  bool pass = false;
  /// No convergent past k exists: the system is rational.
  bool vacuous = false;
  std::string note;
};

struct EmpiricalMu {
  /// Largest resolved local exponent in the deepest layer m = m_max; unset
  /// if none was resolved. Shallow layers have denominators so small that
  /// bounded factors dominate their exponents.
  std::optional<Interval> value;
  /// Largest resolved local exponent over the whole grid.
  std::optional<Interval> grid_max;
  int best_k = 0;
  int best_m = 0;
  std::vector<ApproxPair> grid;
  /// Some p_{k,m}/q_{k,m} hit f(b) exactly.
  bool rational_suspected = false;
  int unresolved = 0;
};

/// Shared state for numeric work on one system: the series, its coefficient
/// bound, certified convergents and the value of f(b).
class Approximations {
 public:
  Approximations(MahlerSystem sys, int bits);

  [[nodiscard]] const MahlerSystem& system() const { return sys_; }
  [[nodiscard]] int bits() const { return bits_; }
  const ValueEstimate& value();
  /// Certified convergent k (k >= 0). Throws UncertifiedInput if it cannot be reached.
  const Convergent& convergent(int k);
  [[nodiscard]] bool rational() const { return cf_.is_rational; }
  /// Number of certified convergents computed so far.
  [[nodiscard]] int convergent_count() const { return static_cast<int>(cf_.convergents.size()); }

  ApproxPair pair(int k, int m);
  RatioReport lemma4(int k, int m_lo, int m_hi, double band_lo = 1e-6, double band_hi = 1e6);
  EmpiricalMu empirical_mu(int k_max, int m_max);

 private:
  void grow(int terms);
  std::optional<Interval> remainder_route(const Convergent& c, int m, const Rat& U);

  MahlerSystem sys_;
  int bits_;
  LaurentSeries f_;
  CoefficientBound bound_;
  CfExpansion cf_;
  std::optional<ValueEstimate> value_;
};

ApproxPair approx_pair(const MahlerSystem& sys, int k, int m, int bits = 4096);
RatioReport lemma4_ratio_check(const MahlerSystem& sys, int k, int m_lo, int m_hi, int bits = 4096);
EmpiricalMu empirical_mu(const MahlerSystem& sys, int bits, int k_max, int m_max);

}  // namespace mahler

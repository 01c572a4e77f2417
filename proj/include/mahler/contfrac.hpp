#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "mahler/algebra.hpp"
#include "mahler/laurent.hpp"

namespace mahler {

/// One convergent p_k/q_k of the continued fraction, normalized so q is monic.
///
/// A certified convergent provably coincides with the convergent of the full
/// (untruncated) series, and `next_degree` / `residual_lead` describe
/// q f - p = residual_lead * z^{-next_degree} + lower terms.
struct Convergent {
  int k = 0;
  Poly p;
  Poly q;
  int degree = 0;
  bool certified = false;
  std::optional<int> next_degree;
  std::optional<Rat> residual_lead;
};

struct CfExpansion {
  std::vector<Poly> quotients;
  std::vector<Convergent> convergents;
  /// Denominator degrees d_k for k >= 1, ascending. Every element of the
  /// true set up to `complete_through` is present.
  std::vector<int> phi;
  int complete_through = 0;
  /// Precision exponent consumed: coefficients down to z^{-horizon} were used.
  int horizon = 0;
  /// The expansion terminated and the series is provably p/q.
  bool is_rational = false;

  /// Convergent with denominator degree `deg`, if it was computed.
  [[nodiscard]] const Convergent* by_degree(int deg) const;
};

/// Optional exact test that f equals p/q, consulted when the residual
/// vanishes over the whole known range of a truncated series.
using RationalityCheck = std::function<bool(const Poly& p, const Poly& q)>;

inline constexpr int kUnbounded = std::numeric_limits<int>::max();

/// Continued-fraction expansion of a truncated Laurent series, computing
/// convergents with d_k <= max_denom_degree. A convergent is certified iff
/// d_k + d_{k+1} <= M, where M is the precision exponent (coefficients are
/// known down to z^{-M}). Throws InsufficientPrecision if the zeroth
/// convergent cannot be certified.
CfExpansion cf_expand(const LaurentSeries& f, int max_denom_degree, const RationalityCheck& check = {});

struct RemainderTop {
  int next_degree = 0;
  Rat lead;
};

/// Recomputes q f - p for a certified convergent and returns the exponent and
/// coefficient of its leading term. Throws UncertifiedInput or
/// InsufficientPrecision.
RemainderTop remainder_top_degree(const LaurentSeries& f, const Convergent& c);

/// All elements of Phi up to `up_to`. Throws InsufficientPrecision if the
/// series does not certify that far.
std::vector<int> phi_prefix(const LaurentSeries& f, int up_to, const RationalityCheck& check = {});

/// q f - p as a truncated series over the exponents the truncation
/// determines; used for certification and by the numeric module.
LaurentSeries convergent_residual(const LaurentSeries& f, const Poly& p, const Poly& q);

}  // namespace mahler

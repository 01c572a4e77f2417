#pragma once

#include <optional>
#include <vector>

#include "mahler/algebra.hpp"

namespace mahler {

/// The tuple (A, B, d, b) of f(z) = A(z)/B(z) * f(z^d), always stored with
/// A and B coprime.
class MahlerSystem {
 public:
  /// Validates and normalizes. Throws DegenerateSystem if A or B is zero or
  /// d < 2 or |b| < 2, and NoLaurentSolution if lc(A) != lc(B) or
  /// (d - 1) does not divide deg B - deg A. A common factor of A and B is
  /// cancelled since it does not change A/B.
  MahlerSystem(Poly A, Poly B, int d, std::optional<Integer> b = std::nullopt);

  [[nodiscard]] const Poly& A() const { return A_; }
  [[nodiscard]] const Poly& B() const { return B_; }
  [[nodiscard]] int d() const { return d_; }
  [[nodiscard]] const std::optional<Integer>& b() const { return b_; }

  [[nodiscard]] int ra() const { return A_.degree(); }
  [[nodiscard]] int rb() const { return B_.degree(); }
  [[nodiscard]] const Rat& alpha() const { return A_.lead(); }
  [[nodiscard]] const Rat& beta() const { return B_.lead(); }
  /// Exponent of the leading term of f: (r_b - r_a) / (d - 1).
  [[nodiscard]] int top() const { return (rb() - ra()) / (d_ - 1); }

  /// (r_a + r_b) / (d - 1): gaps strictly larger than this are big.
  [[nodiscard]] Rat big_gap_threshold() const;
  /// r_a / (d - 1) and r_b / (d - 1).
  [[nodiscard]] Rat ra_shift() const { return make_rat(ra(), d_ - 1); }
  [[nodiscard]] Rat rb_shift() const { return make_rat(rb(), d_ - 1); }

  /// Whether A(b^{d^m}) B(b^{d^m}) != 0 for every m >= 0. Decided exactly:
  /// once |b|^{d^m} exceeds the Cauchy root bounds of A and B no later term
  /// can vanish. Precondition: b is set.
  [[nodiscard]] bool hypothesis_holds() const;

 private:
  Poly A_;
  Poly B_;
  int d_;
  std::optional<Integer> b_;
};

/// Truncated Laurent series sum_{i < valid} coeffs[i] * z^{top - i}.
///
/// When `exact` is set every coefficient past the stored ones is zero, i.e.
/// the series is a Laurent polynomial.
struct LaurentSeries {
  int top = 0;
  std::vector<Rat> coeffs;
  bool exact = false;

  [[nodiscard]] int valid() const { return static_cast<int>(coeffs.size()); }
  /// Smallest exponent whose coefficient is known.
  [[nodiscard]] int lowest_known() const { return top - valid() + 1; }
  /// Coefficient of z^e; zero above top. Throws InsufficientPrecision below
  /// the known range unless the series is exact.
  [[nodiscard]] Rat coeff_at(int e) const;
};

/// The normalized (leading coefficient 1) solution with n_terms exact
/// coefficients. The recursion is verified against the defining equation
/// before returning.
LaurentSeries solve_mahler(const MahlerSystem& sys, int n_terms);

/// Coefficients of B(z) f(z) - A(z) f(z^d) in 1/z, over the range where the
/// truncation determines them. All zero for a correct solution.
std::vector<Rat> defining_equation_residual(const MahlerSystem& sys, const LaurentSeries& f);

/// Whether the rational function p/q satisfies B(z) p(z) q(z^d) = A(z) p(z^d) q(z).
/// Solutions are unique up to a scalar, so together with agreement of the
/// leading term this proves f = p/q exactly.
bool satisfies_functional_equation(const MahlerSystem& sys, const Poly& p, const Poly& q);

struct SeriesEnclosure {
  Rat lo;
  Rat hi;
  /// The radius is a heuristic; rigorous enclosures live in the numeric module.
  bool rigorous = false;
};

/// Partial sum at x with radius 2^{tail_bound_exponent} * |x|^{top - valid + 1}.
/// The radius bounds the tail whenever the omitted coefficients are at most
/// 2^{tail_bound_exponent} in absolute value and |x| >= 2.
SeriesEnclosure series_eval_tail(const LaurentSeries& f, const Rat& x, int tail_bound_exponent);

}  // namespace mahler

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mahler {

using Integer = mpz_class;
/// Exact rational. gmpxx keeps values canonical (lowest terms, positive
/// denominator, zero as 0/1) through every arithmetic operator.
using Rat = mpq_class;

/// Parses "n", "-n" or "n/d". Throws ParseError on malformed input or d == 0.
Rat parse_rat(std::string_view text);
/// n/d in canonical form. gmpxx's two-argument constructor does not reduce.
Rat make_rat(const Integer& n, const Integer& d);
/// "n" for integers, "n/d" otherwise.
std::string to_string(const Rat& r);

/// Dense univariate polynomial over Q, ascending powers of z.
///
/// The coefficient vector never has a zero last entry; the zero polynomial
/// is the empty vector and has degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rat> coeffs);
  Poly(std::initializer_list<long> coeffs);

  static Poly constant(const Rat& c);
  static Poly monomial(const Rat& c, std::size_t degree);
  /// The polynomial z.
  static Poly z();

  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  /// Leading coefficient. Precondition: nonzero.
  [[nodiscard]] const Rat& lead() const { return coeffs_.back(); }
  /// Coefficient of z^i; zero beyond the degree.
  [[nodiscard]] Rat coeff(std::size_t i) const;
  [[nodiscard]] std::span<const Rat> coeffs() const { return coeffs_; }
  [[nodiscard]] std::size_t nonzero_terms() const;

  [[nodiscard]] Poly monic() const;
  [[nodiscard]] Rat eval(const Rat& x) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rat& s);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) { return a *= Rat(-1); }
  friend Poly operator*(Poly a, const Rat& s) { return a *= s; }
  friend Poly operator*(const Rat& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<Rat> coeffs_;
};

struct DivMod {
  Poly quotient;
  Poly remainder;
};

/// Exact long division; deg(remainder) < deg(b). Throws DivisionByZero.
DivMod divmod(const Poly& a, const Poly& b);
/// a / b when b divides a exactly; throws Error if the remainder is nonzero.
Poly exact_div(const Poly& a, const Poly& b);

/// Monic GCD computed by a primitive-part integer PRS. gcd(0, 0) throws.
Poly gcd(const Poly& a, const Poly& b);

/// p(z^e). Precondition e >= 1.
Poly substitute_power(const Poly& p, unsigned long e);

/// Horner evaluation at an integer point.
Rat eval_int(const Poly& p, const Integer& x);

/// Content-free integer polynomial proportional to p with positive leading
/// coefficient. Used by the PRS and by the Hankel module.
std::vector<Integer> primitive_integer_part(const Poly& p);

/// Human-readable form, e.g. "z^2+2*z+4".
std::string to_string(const Poly& p);

/// Upper bound (Cauchy) on the modulus of every complex root: 1 + max|c_i/c_n|.
Rat cauchy_root_bound(const Poly& p);

}  // namespace mahler

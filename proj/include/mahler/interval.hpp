#pragma once

#include <mpfr.h>

#include <string>

#include "mahler/algebra.hpp"

namespace mahler {

/// Closed real interval [lo, hi] with MPFR endpoints rounded outward.
class Interval {
 public:
  explicit Interval(mpfr_prec_t bits = 128);
  /// Encloses [lo, hi]; the endpoints are rounded down and up respectively.
  Interval(const Rat& lo, const Rat& hi, mpfr_prec_t bits);
  Interval(const Interval& o);
  Interval(Interval&& o) noexcept;
  Interval& operator=(const Interval& o);
  Interval& operator=(Interval&& o) noexcept;
  ~Interval();

  static Interval point(const Rat& x, mpfr_prec_t bits) { return Interval(x, x, bits); }
  /// [+inf, +inf].
  static Interval infinite(mpfr_prec_t bits);

  [[nodiscard]] mpfr_srcptr lo() const { return lo_; }
  [[nodiscard]] mpfr_srcptr hi() const { return hi_; }
  [[nodiscard]] mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }

  [[nodiscard]] bool contains(const Rat& x) const;
  [[nodiscard]] bool contains(const Interval& o) const;
  [[nodiscard]] bool overlaps(const Interval& o) const;
  [[nodiscard]] bool excludes_zero() const;
  [[nodiscard]] bool is_finite() const;
  /// Throws Error if the intervals are disjoint.
  [[nodiscard]] Interval intersect(const Interval& o) const;

  [[nodiscard]] double lo_double() const;
  [[nodiscard]] double hi_double() const;
  [[nodiscard]] double mid_double() const;
  /// hi - lo rounded up.
  [[nodiscard]] double width() const;
  /// log2 of the width, rounded up; -inf for a point.
  [[nodiscard]] double log2_width() const;

  /// Decimal endpoints with `digits` significant digits, rounded outward.
  [[nodiscard]] std::string lo_string(int digits = 20) const;
  [[nodiscard]] std::string hi_string(int digits = 20) const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  /// Throws DivisionByZero if b contains 0.
  friend Interval operator/(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a);
  friend Interval log2(const Interval& x);

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

/// log2 of a positive interval. Throws Error if lo <= 0.
Interval log2(const Interval& x);

/// log2 |x| enclosed at the given precision.
Interval log2_abs(const Rat& x, mpfr_prec_t bits);

}  // namespace mahler

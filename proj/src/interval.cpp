#include "mahler/interval.hpp"

#include <algorithm>
#include <cmath>

#include "mahler/errors.hpp"

namespace mahler {

namespace {

std::string endpoint_string(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
  if (mpfr_inf_p(x)) return mpfr_sgn(x) > 0 ? "inf" : "-inf";
  if (mpfr_nan_p(x)) return "nan";
  mpfr_exp_t e = 0;
  char* s = mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(digits), x, rnd);
  std::string m(s);
  mpfr_free_str(s);
  if (mpfr_zero_p(x)) return "0";
  std::string sign;
  if (m[0] == '-') {
    sign = "-";
    m.erase(0, 1);
  }
  std::string out = sign + m.substr(0, 1);
  if (m.size() > 1) out += "." + m.substr(1);
  out += "e" + std::to_string(static_cast<long>(e) - 1);
  return out;
}

}  // namespace

Interval::Interval(mpfr_prec_t bits) {
  mpfr_init2(lo_, bits);
  mpfr_init2(hi_, bits);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Rat& lo, const Rat& hi, mpfr_prec_t bits) {
  if (lo > hi) throw Error("Interval: lo > hi");
  mpfr_init2(lo_, bits);
  mpfr_init2(hi_, bits);
  mpfr_set_q(lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, hi.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Interval& o) {
  mpfr_init2(lo_, o.precision());
  mpfr_init2(hi_, o.precision());
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : Interval(o.precision()) { mpfr_swap(lo_, o.lo_), mpfr_swap(hi_, o.hi_); }

Interval& Interval::operator=(const Interval& o) {
  if (this != &o) {
    mpfr_set_prec(lo_, o.precision());
    mpfr_set_prec(hi_, o.precision());
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::infinite(mpfr_prec_t bits) {
  Interval r(bits);
  mpfr_set_inf(r.lo_, 1);
  mpfr_set_inf(r.hi_, 1);
  return r;
}

bool Interval::contains(const Rat& x) const { return mpfr_cmp_q(lo_, x.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, x.get_mpq_t()) >= 0; }

bool Interval::contains(const Interval& o) const { return mpfr_lessequal_p(lo_, o.lo_) && mpfr_greaterequal_p(hi_, o.hi_); }

bool Interval::overlaps(const Interval& o) const { return mpfr_lessequal_p(lo_, o.hi_) && mpfr_lessequal_p(o.lo_, hi_); }

bool Interval::excludes_zero() const { return mpfr_sgn(lo_) > 0 || mpfr_sgn(hi_) < 0; }

bool Interval::is_finite() const { return mpfr_number_p(lo_) && mpfr_number_p(hi_); }

Interval Interval::intersect(const Interval& o) const {
  if (!overlaps(o)) throw Error("Interval::intersect: disjoint intervals");
  Interval r(std::max(precision(), o.precision()));
  mpfr_max(r.lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_min(r.hi_, hi_, o.hi_, MPFR_RNDU);
  return r;
}

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid_double() const {
  mpfr_t m;
  mpfr_init2(m, precision() + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  const double r = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return r;
}

double Interval::width() const {
  mpfr_t w;
  mpfr_init2(w, precision());
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  const double r = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return r;
}

double Interval::log2_width() const {
  mpfr_t w;
  mpfr_init2(w, precision());
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double r = -INFINITY;
  if (!mpfr_zero_p(w)) {
    mpfr_log2(w, w, MPFR_RNDU);
    r = mpfr_get_d(w, MPFR_RNDU);
  }
  mpfr_clear(w);
  return r;
}

std::string Interval::lo_string(int digits) const { return endpoint_string(lo_, digits, MPFR_RNDD); }
std::string Interval::hi_string(int digits) const { return endpoint_string(hi_, digits, MPFR_RNDU); }

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(std::max(a.precision(), b.precision()));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a) {
  Interval r(a.precision());
  mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

Interval operator*(const Interval& a, const Interval& b) {
  const mpfr_prec_t p = std::max(a.precision(), b.precision());
  Interval r(p);
  mpfr_t t;
  mpfr_init2(t, p);
  mpfr_srcptr xs[] = {a.lo_, a.hi_};
  mpfr_srcptr ys[] = {b.lo_, b.hi_};
  bool first = true;
  for (auto x : xs) {
    for (auto y : ys) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (!b.excludes_zero()) throw DivisionByZero("Interval: divisor contains 0");
  const mpfr_prec_t p = std::max(a.precision(), b.precision());
  Interval inv(p);
  mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
  mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
  return a * inv;
}

Interval log2(const Interval& x) {
  if (mpfr_sgn(x.lo_) <= 0) throw Error("log2: interval not positive");
  Interval r(x.precision());
  mpfr_log2(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_log2(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Interval log2_abs(const Rat& x, mpfr_prec_t bits) {
  if (x == 0) throw Error("log2_abs: zero");
  const Rat a = abs(x);
  return log2(Interval(a, a, bits));
}

}  // namespace mahler

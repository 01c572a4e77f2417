#include "mahler/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "mahler/errors.hpp"

namespace mahler {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

Integer parse_integer(std::string_view s) {
  if (!is_integer_literal(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
  if (s[0] == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

using ZPoly = std::vector<Integer>;

void ztrim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Integer zcontent(const ZPoly& p) {
  Integer g = 0;
  for (const auto& c : p) {
    if (c != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

void zmake_primitive(ZPoly& p) {
  ztrim(p);
  if (p.empty()) return;
  Integer g = zcontent(p);
  if (p.back() < 0) g = -g;
  if (g != 1) {
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
}

// Pseudo-remainder of a by b, both nonzero, with the leading-coefficient
// power folded in incrementally; the result is only used up to content.
ZPoly zprem(ZPoly a, const ZPoly& b) {
  const std::size_t db = b.size() - 1;
  const Integer& lb = b.back();
  while (!a.empty() && a.size() - 1 >= db) {
    const std::size_t shift = a.size() - 1 - db;
    const Integer la = a.back();
    for (auto& c : a) c *= lb;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= la * b[i];
    ztrim(a);
    // Keep the intermediate small; only the primitive part matters.
    zmake_primitive(a);
  }
  return a;
}

}  // namespace

Rat parse_rat(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  Rat r;
  if (slash == std::string_view::npos) {
    r = Rat(parse_integer(text));
  } else {
    Integer num = parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
      throw ParseError("denominator must be unsigned: '" + std::string(text) + "'");
    }
    Integer den = parse_integer(den_text);
    if (den == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
    r = Rat(num, den);
    r.canonicalize();
  }
  return r;
}

Rat make_rat(const Integer& n, const Integer& d) {
  if (d == 0) throw DivisionByZero("rational with zero denominator");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& r) { return r.get_str(10); }

Poly::Poly(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly::Poly(std::initializer_list<long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long c : coeffs) coeffs_.emplace_back(c);
  trim();
}

Poly Poly::constant(const Rat& c) { return Poly(std::vector<Rat>{c}); }

Poly Poly::monomial(const Rat& c, std::size_t degree) {
  std::vector<Rat> v(degree + 1);
  v[degree] = c;
  return Poly(std::move(v));
}

Poly Poly::z() { return monomial(Rat(1), 1); }

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rat Poly::coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rat(0); }

std::size_t Poly::nonzero_terms() const {
  return static_cast<std::size_t>(
      std::count_if(coeffs_.begin(), coeffs_.end(), [](const Rat& c) { return c != 0; }));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  Poly r = *this;
  const Rat inv = 1 / lead();
  r *= inv;
  return r;
}

Rat Poly::eval(const Rat& x) const {
  Rat acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Rat& s) {
  if (s == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  // Iterate over the sparser operand's nonzero entries; substituted
  // polynomials p(z^d) are mostly zero runs.
  const Poly& sparse = a.nonzero_terms() <= b.nonzero_terms() ? a : b;
  const Poly& dense = (&sparse == &a) ? b : a;
  std::vector<Rat> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  Rat t;
  for (std::size_t i = 0; i < sparse.coeffs_.size(); ++i) {
    const Rat& s = sparse.coeffs_[i];
    if (s == 0) continue;
    for (std::size_t j = 0; j < dense.coeffs_.size(); ++j) {
      const Rat& c = dense.coeffs_[j];
      if (c == 0) continue;
      mpq_mul(t.get_mpq_t(), s.get_mpq_t(), c.get_mpq_t());
      out[i + j] += t;
    }
  }
  return Poly(std::move(out));
}

DivMod divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly{}, a};
  std::vector<Rat> rem(a.coeffs().begin(), a.coeffs().end());
  const int db = b.degree();
  const std::size_t qlen = static_cast<std::size_t>(a.degree() - db + 1);
  std::vector<Rat> quot(qlen);
  const Rat inv_lead = 1 / b.lead();
  const auto bc = b.coeffs();
  Rat t;
  for (std::size_t k = qlen; k-- > 0;) {
    const Rat& top = rem[k + static_cast<std::size_t>(db)];
    if (top == 0) continue;
    const Rat q = top * inv_lead;
    quot[k] = q;
    for (int i = 0; i <= db; ++i) {
      const Rat& c = bc[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      mpq_mul(t.get_mpq_t(), q.get_mpq_t(), c.get_mpq_t());
      rem[k + static_cast<std::size_t>(i)] -= t;
    }
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly exact_div(const Poly& a, const Poly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw Error("exact_div: " + to_string(b) + " does not divide " + to_string(a));
  return q;
}

std::vector<Integer> primitive_integer_part(const Poly& p) {
  if (p.is_zero()) return {};
  Integer l = 1;
  for (const auto& c : p.coeffs()) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  ZPoly z(p.coeffs().size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const Rat& c = p.coeffs()[i];
    z[i] = c.get_num() * (l / c.get_den());
  }
  zmake_primitive(z);
  return z;
}

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) throw DivisionByZero("gcd(0, 0) is undefined");
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  ZPoly x = primitive_integer_part(a);
  ZPoly y = primitive_integer_part(b);
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    if (y.size() == 1) return Poly{1};
    ZPoly r = zprem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  std::vector<Rat> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = Rat(x[i]);
  return Poly(std::move(out)).monic();
}

Poly substitute_power(const Poly& p, unsigned long e) {
  if (e == 0) throw Error("substitute_power: exponent must be >= 1");
  if (p.is_zero() || e == 1) return p;
  std::vector<Rat> out(static_cast<std::size_t>(p.degree()) * e + 1);
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) out[i * e] = p.coeffs()[i];
  return Poly(std::move(out));
}

Rat eval_int(const Poly& p, const Integer& x) { return p.eval(Rat(x)); }

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = p.coeffs().size(); k-- > 0;) {
    const Rat& c = p.coeffs()[k];
    if (c == 0) continue;
    Rat mag = abs(c);
    if (c < 0) {
      os << "-";
    } else if (!first) {
      os << "+";
    }
    const bool unit = (mag == 1);
    if (k == 0 || !unit) {
      os << to_string(mag);
      if (k > 0) os << "*";
    }
    if (k >= 1) os << "z";
    if (k >= 2) os << "^" << k;
    first = false;
  }
  return os.str();
}

Rat cauchy_root_bound(const Poly& p) {
  if (p.degree() < 1) return Rat(0);
  Rat m = 0;
  for (int i = 0; i < p.degree(); ++i) {
    Rat q = abs(p.coeffs()[static_cast<std::size_t>(i)] / p.lead());
    if (q > m) m = q;
  }
  return 1 + m;
}

}  // namespace mahler

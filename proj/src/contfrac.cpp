#include "mahler/contfrac.hpp"

#include <algorithm>
#include <string>

#include "mahler/errors.hpp"

namespace mahler {

namespace {

// Coefficients of a truncated Laurent series over exponents [lo, hi];
// c[i] is the coefficient of z^{hi - i}. Everything above hi is zero.
struct Window {
  int hi = 0;
  int lo = 0;
  std::vector<Rat> c;

  [[nodiscard]] const Rat& at(int e, const Rat& zero) const {
    if (e > hi) return zero;
    return c[static_cast<std::size_t>(hi - e)];
  }
  [[nodiscard]] std::optional<int> top_nonzero() const {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] != 0) return hi - static_cast<int>(i);
    }
    return std::nullopt;
  }
};

// -polynomial part of num/den where num = z^{-dk}(...) and den = z^{-next}(...),
// i.e. the next partial quotient, of degree next - dk.
Poly next_quotient(const Window& num, int dk, const Window& den, int next) {
  const int m = next - dk;
  const Rat zero;
  const Rat& eps0 = den.at(-next, zero);
  const Rat inv0 = 1 / eps0;
  std::vector<Rat> s(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) {
    Rat acc = num.at(-dk - j, zero);
    for (int i = 1; i <= j; ++i) acc -= den.at(-next - i, zero) * s[static_cast<std::size_t>(j - i)];
    s[static_cast<std::size_t>(j)] = acc * inv0;
  }
  std::vector<Rat> a(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) a[static_cast<std::size_t>(m - j)] = -s[static_cast<std::size_t>(j)];
  return Poly(std::move(a));
}

// a * e + prev over exponents [lo, hi].
Window combine(const Poly& a, const Window& e, const Window& prev, int hi, int lo) {
  Window out{hi, lo, std::vector<Rat>(static_cast<std::size_t>(hi - lo + 1))};
  const Rat zero;
  Rat t;
  const auto ac = a.coeffs();
  for (int x = hi; x >= lo; --x) {
    Rat& acc = out.c[static_cast<std::size_t>(hi - x)];
    acc = prev.at(x, zero);
    for (std::size_t j = 0; j < ac.size(); ++j) {
      if (ac[j] == 0) continue;
      const Rat& v = e.at(x - static_cast<int>(j), zero);
      if (v == 0) continue;
      mpq_mul(t.get_mpq_t(), ac[j].get_mpq_t(), v.get_mpq_t());
      acc += t;
    }
  }
  return out;
}

Convergent make_convergent(int k, const Poly& p, const Poly& q) {
  const Rat inv = 1 / q.lead();
  return Convergent{k, p * inv, q * inv, q.degree(), false, std::nullopt, std::nullopt};
}

}  // namespace

const Convergent* CfExpansion::by_degree(int deg) const {
  for (const auto& c : convergents) {
    if (c.degree == deg) return &c;
  }
  return nullptr;
}

CfExpansion cf_expand(const LaurentSeries& f, int max_denom_degree, const RationalityCheck& check) {
  if (max_denom_degree < 1) throw Error("cf_expand: max_denom_degree must be >= 1");
  if (f.valid() < 1) throw InsufficientPrecision("cf_expand: empty series");

  // An exact series is padded with zeros far enough that a vanishing window
  // means a vanishing residual.
  const int lowest = f.exact ? f.lowest_known() - 2 * max_denom_degree - 2 : f.lowest_known();
  const int M = -lowest;

  CfExpansion out;
  out.horizon = M;

  const Rat zero;
  auto f_at = [&](int e) -> Rat { return (e < f.lowest_known()) ? Rat(0) : f.coeff_at(e); };

  std::vector<Rat> a0(static_cast<std::size_t>(std::max(0, f.top + 1)));
  for (int e = 0; e <= f.top; ++e) a0[static_cast<std::size_t>(e)] = f_at(e);
  Poly a = Poly(std::move(a0));

  Poly p_prev{1};
  Poly q_prev;
  Poly p = a;
  Poly q{1};
  Window e_prev{0, lowest, std::vector<Rat>(static_cast<std::size_t>(M + 1))};
  e_prev.c[0] = -1;
  Window e{-1, lowest, {}};
  if (M >= 1) {
    e.c.resize(static_cast<std::size_t>(M));
    for (int x = -1; x >= lowest; --x) e.c[static_cast<std::size_t>(-1 - x)] = f_at(x);
  }
  out.quotients.push_back(a);

  int dk = 0;
  for (int k = 0;; ++k) {
    Convergent conv = make_convergent(k, p, q);
    const auto top = e.top_nonzero();
    if (!top) {
      const bool proven = f.exact || (check && check(conv.p, conv.q));
      if (proven) {
        conv.certified = true;
        out.is_rational = true;
        out.complete_through = kUnbounded;
      } else {
        out.complete_through = dk;
      }
      out.convergents.push_back(std::move(conv));
      break;
    }
    const int next = -*top;
    conv.certified = true;
    conv.next_degree = next;
    conv.residual_lead = e.at(*top, zero) / q.lead();
    out.convergents.push_back(std::move(conv));
    out.complete_through = next;
    if (next > max_denom_degree || 2 * next > M) break;

    a = next_quotient(e_prev, dk, e, next);
    Poly p_next = a * p + p_prev;
    Poly q_next = a * q + q_prev;
    Window e_next = combine(a, e, e_prev, -dk, next + lowest);
    for (int x = -dk; x >= -next; --x) {
      if (e_next.at(x, zero) != 0) throw Error("cf_expand: internal error, quotient did not cancel");
    }
    // Drop the cancelled head.
    e_next.c.erase(e_next.c.begin(), e_next.c.begin() + (next - dk + 1));
    e_next.hi = -next - 1;

    out.quotients.push_back(a);
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
    e_prev = std::move(e);
    e = std::move(e_next);
    dk = next;
  }

  if (!out.convergents.front().certified) {
    throw InsufficientPrecision("cf_expand: not even the zeroth convergent certifies with " +
                                std::to_string(f.valid()) + " coefficients");
  }
  for (const auto& c : out.convergents) {
    if (c.k >= 1) out.phi.push_back(c.degree);
  }
  const auto& last = out.convergents.back();
  if (last.next_degree && (out.phi.empty() || *last.next_degree > out.phi.back())) {
    out.phi.push_back(*last.next_degree);
  }
  return out;
}

LaurentSeries convergent_residual(const LaurentSeries& f, const Poly& p, const Poly& q) {
  const int dq = q.degree();
  const int hi = f.top + dq;
  const int lo = f.exact ? std::min(f.lowest_known(), 0) : f.lowest_known() + dq;
  LaurentSeries r;
  r.top = std::max(hi, p.degree());
  r.exact = f.exact;
  Rat t;
  for (int x = r.top; x >= lo; --x) {
    Rat acc = 0;
    for (int j = 0; j <= dq; ++j) {
      const Rat& qj = q.coeffs()[static_cast<std::size_t>(j)];
      const int e = x - j;
      if (qj == 0 || e > f.top || e < f.lowest_known()) continue;
      mpq_mul(t.get_mpq_t(), qj.get_mpq_t(), f.coeffs[static_cast<std::size_t>(f.top - e)].get_mpq_t());
      acc += t;
    }
    if (x >= 0) acc -= p.coeff(static_cast<std::size_t>(x));
    r.coeffs.push_back(std::move(acc));
  }
  return r;
}

RemainderTop remainder_top_degree(const LaurentSeries& f, const Convergent& c) {
  if (!c.certified) throw UncertifiedInput("remainder_top_degree: convergent " + std::to_string(c.k) + " is not certified");
  const LaurentSeries r = convergent_residual(f, c.p, c.q);
  for (int i = 0; i < r.valid(); ++i) {
    const Rat& v = r.coeffs[static_cast<std::size_t>(i)];
    if (v == 0) continue;
    const int e = r.top - i;
    if (e >= 0) throw Error("remainder_top_degree: p is not the polynomial part of q f");
    return {-e, v};
  }
  throw InsufficientPrecision("remainder_top_degree: residual vanishes over the known range");
}

std::vector<int> phi_prefix(const LaurentSeries& f, int up_to, const RationalityCheck& check) {
  const CfExpansion cf = cf_expand(f, std::max(1, up_to), check);
  if (cf.complete_through < up_to) {
    throw InsufficientPrecision("phi_prefix: certified only through degree " + std::to_string(cf.complete_through) +
                                ", requested " + std::to_string(up_to));
  }
  std::vector<int> out;
  for (int v : cf.phi) {
    if (v <= up_to) out.push_back(v);
  }
  return out;
}

}  // namespace mahler

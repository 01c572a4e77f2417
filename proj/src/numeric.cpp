#include "mahler/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mahler/errors.hpp"

namespace mahler {

namespace {

constexpr int kMaxTerms = 1 << 13;
constexpr mpfr_prec_t kLogBits = 256;

Integer ipow(const Integer& b, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

Rat rpow(const Rat& b, int e) {
  Rat r = 1;
  const Rat base = e >= 0 ? b : Rat(1 / b);
  for (int i = 0; i < std::abs(e); ++i) r *= base;
  return r;
}

// 2^e for e possibly negative.
Rat pow2(long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(std::labs(e)));
  return e >= 0 ? Rat(p) : Rat(1 / Rat(p));
}

// Exact enclosure of |[lo, hi]|.
std::pair<Rat, Rat> abs_range(const Rat& lo, const Rat& hi) {
  if (lo >= 0) return {lo, hi};
  if (hi <= 0) return {-hi, -lo};
  return {Rat(0), std::max(Rat(-lo), hi)};
}

// Reversed coefficients divided by the leading one: p(z) = lc z^r sum_j out[j] z^{-j}.
std::vector<Rat> reversed_normalized(const Poly& p) {
  const int r = p.degree();
  std::vector<Rat> out(static_cast<std::size_t>(r) + 1);
  for (int j = 0; j <= r; ++j) out[static_cast<std::size_t>(j)] = p.coeff(static_cast<std::size_t>(r - j)) / p.lead();
  return out;
}

Integer b_power(const Integer& b, int d, int t) {
  Integer y = b;
  for (int i = 0; i < t; ++i) y = ipow(y, static_cast<unsigned long>(d));
  return y;
}

void require_nonvanishing(const MahlerSystem& sys, const Integer& y) {
  if (eval_int(sys.A(), y) == 0 || eval_int(sys.B(), y) == 0) {
    throw HypothesisViolated("A or B vanishes at " + y.get_str());
  }
}

}  // namespace

CoefficientBound coefficient_bound(const MahlerSystem& sys, const LaurentSeries& f) {
  // c_i = sum_{j + d l = i} a_j c_l - sum_{j >= 1} b_j c_{i - j}. If |c_l| <= C K^l
  // for l < i then |c_i| <= C K^i (sum|a| K^{-i(d-1)/d} + sum_{j>=1} |b_j| K^{-j}),
  // and the bracket is <= 1 once K >= 2 sum|b_j| and (2 sum|a|)^d <= K^{i(d-1)}.
  const int d = sys.d();
  Rat SA = 0;
  for (const Rat& a : reversed_normalized(sys.A())) SA += abs(a);
  Rat SB = 0;
  const auto br = reversed_normalized(sys.B());
  for (std::size_t j = 1; j < br.size(); ++j) SB += abs(br[j]);

  CoefficientBound out;
  out.K = std::max(Rat(2), Rat(2 * SB));
  const Rat lhs = rpow(2 * SA, d);
  const Rat step = rpow(out.K, d - 1);
  Rat rhs = step;
  out.i0 = 1;
  while (rhs < lhs) {
    rhs *= step;
    ++out.i0;
  }
  if (f.valid() < out.i0) {
    throw InsufficientPrecision("coefficient_bound: need " + std::to_string(out.i0) + " coefficients, have " +
                                std::to_string(f.valid()));
  }
  out.C = 0;
  Rat Kp = 1;
  for (const Rat& c : f.coeffs) {
    const Rat r = abs(c) / Kp;
    if (r > out.C) out.C = r;
    Kp *= out.K;
  }
  return out;
}

ValueEstimate eval_mahler_value(const MahlerSystem& sys, int bits) {
  Approximations ctx(sys, bits);
  return ctx.value();
}

Approximations::Approximations(MahlerSystem sys, int bits) : sys_(std::move(sys)), bits_(bits) {
  if (bits_ < 16) throw Error("Approximations: bits must be >= 16");
  grow(128);
}

void Approximations::grow(int terms) {
  if (terms > kMaxTerms) throw InsufficientPrecision("numeric: more than " + std::to_string(kMaxTerms) + " series terms needed");
  f_ = solve_mahler(sys_, terms);
  bound_ = coefficient_bound(sys_, f_);
  const MahlerSystem& s = sys_;
  const RationalityCheck check = [&s](const Poly& p, const Poly& q) { return satisfies_functional_equation(s, p, q); };
  cf_ = cf_expand(f_, std::max(1, terms / 2), check);
}

const ValueEstimate& Approximations::value() {
  if (value_) return *value_;
  if (!sys_.b()) throw Error("eval_mahler_value: no evaluation point b");
  const Integer& b = *sys_.b();
  const int d = sys_.d();

  // f(b) = prod_{t < depth} (A/B)(b^{d^t}) f(x), x = b^{d^depth} large.
  Rat U = 1;
  Integer y = b;
  int depth = 0;
  const Rat need = std::max(pow2(64), Rat(4 * bound_.K));
  while (Rat(abs(y)) < need) {
    require_nonvanishing(sys_, y);
    U *= eval_int(sys_.A(), y) / eval_int(sys_.B(), y);
    y = ipow(y, static_cast<unsigned long>(d));
    ++depth;
  }
  const Rat x = y;
  const Rat ax = abs(x);
  const Rat target = pow2(-(bits_ + 1));

  for (;;) {
    // Tail sum_{i >= N} |c_i| |x|^{top - i} <= C |x|^top r^N / (1 - r), r = K/|x|.
    const Rat r = bound_.K / ax;
    Rat t = abs(U) * bound_.C * rpow(ax, f_.top) / (1 - r);
    int N = 0;
    while (t > target) {
      t *= r;
      ++N;
    }
    N = std::max(N, 1);
    if (N > f_.valid()) {
      grow(std::max(2 * f_.valid(), N + 8));
      continue;
    }
    Rat S = 0;
    const Rat w = 1 / x;
    for (int i = N; i-- > 0;) S = S * w + f_.coeffs[static_cast<std::size_t>(i)];
    S *= rpow(x, f_.top);
    const Rat center = U * S;
    ValueEstimate v{Interval(center - t, center + t, bits_ + kGuardBits), center - t, center + t, bits_, depth, N,
                    "functional equation x" + std::to_string(depth) + ", series tail bound"};
    value_ = std::move(v);
    return *value_;
  }
}

const Convergent& Approximations::convergent(int k) {
  if (k < 0) throw Error("convergent: negative index");
  for (;;) {
    if (k < convergent_count()) {
      const Convergent& c = cf_.convergents[static_cast<std::size_t>(k)];
      if (c.certified) return c;
    }
    if (cf_.is_rational) throw UncertifiedInput("f is rational; it has " + std::to_string(convergent_count()) + " convergents");
    if (2 * f_.valid() > kMaxTerms) throw UncertifiedInput("convergent " + std::to_string(k) + " out of reach");
    grow(2 * f_.valid());
  }
}

std::optional<Interval> Approximations::remainder_route(const Convergent& c0, int m, const Rat& U) {
  const Poly p = c0.p;
  const Poly q = c0.q;
  const int next = *c0.next_degree;
  const Rat x = b_power(*sys_.b(), sys_.d(), m);
  const Rat ax = abs(x);
  for (;;) {
    if (!(ax > 2 * bound_.K)) return std::nullopt;
    const Rat r = bound_.K / ax;
    // |[z^{-i}](q f - p)| <= C K^{top} Q(K) K^i with Q(K) = sum |q_j| K^j.
    Rat QK = 0;
    Rat Kp = 1;
    for (const Rat& qj : q.coeffs()) {
      QK += abs(qj) * Kp;
      Kp *= bound_.K;
    }
    const Rat Cr = bound_.C * rpow(bound_.K, f_.top) * QK;
    const Rat guard = pow2(-kGuardBits);
    const Rat w = 1 / x;
    Rat S = 0;
    Rat wp = rpow(w, next);
    Rat tail = Cr * rpow(r, next) / (1 - r);
    bool short_series = false;
    for (int i = next;; ++i) {
      // Coefficient of z^{-i} in q f needs f down to z^{-i - deg q}.
      Rat ri = 0;
      for (int j = 0; j <= q.degree(); ++j) {
        const Rat& qj = q.coeffs()[static_cast<std::size_t>(j)];
        if (qj == 0) continue;
        const int idx = f_.top + i + j;
        if (idx >= f_.valid()) {
          short_series = true;
          break;
        }
        ri += qj * f_.coeffs[static_cast<std::size_t>(idx)];
      }
      if (short_series) break;
      S += ri * wp;
      wp *= w;
      tail *= r;
      if (i > next && S != 0 && tail <= guard * abs(S)) break;
    }
    if (short_series) {
      grow(2 * f_.valid());
      continue;
    }
    const Rat aU = abs(U);
    return Interval(aU * (abs(S) - tail), aU * (abs(S) + tail), kLogBits);
  }
}

ApproxPair Approximations::pair(int k, int m) {
  if (m < 0) throw Error("approx_pair: m must be >= 0");
  if (!sys_.b()) throw Error("approx_pair: no evaluation point b");
  const Convergent c = convergent(k);
  const Integer& b = *sys_.b();
  const int d = sys_.d();

  Rat UA = 1;
  Rat UB = 1;
  Integer y = b;
  for (int t = 0; t < m; ++t) {
    require_nonvanishing(sys_, y);
    UA *= eval_int(sys_.A(), y);
    UB *= eval_int(sys_.B(), y);
    y = ipow(y, static_cast<unsigned long>(d));
  }
  ApproxPair out;
  out.k = k;
  out.m = m;
  out.q_val = UB * eval_int(c.q, y);
  out.p_val = UA * eval_int(c.p, y);

  Integer D;
  mpz_lcm(D.get_mpz_t(), out.q_val.get_den_mpz_t(), out.p_val.get_den_mpz_t());
  const Integer P = Rat(out.p_val * D).get_num();
  const Integer Q = Rat(out.q_val * D).get_num();
  Integer g;
  mpz_gcd(g.get_mpz_t(), P.get_mpz_t(), Q.get_mpz_t());
  const int sign = Q < 0 ? -1 : 1;
  out.p_reduced = sign * P / g;
  out.q_reduced = sign * Q / g;
  const Rat scale = make_rat(D, g);

  const bool last_of_rational = cf_.is_rational && k == convergent_count() - 1;
  if (last_of_rational) {
    out.err = Interval::point(Rat(0), kLogBits);
    out.exact_hit = true;
    out.local_exponent = Interval::infinite(kLogBits);
    return out;
  }

  const ValueEstimate& v = value();
  const Rat e1 = out.q_val * v.lo - out.p_val;
  const Rat e2 = out.q_val * v.hi - out.p_val;
  const auto [lo, hi] = abs_range(std::min(e1, e2), std::max(e1, e2));
  out.err_product = Interval(lo, hi, kLogBits);
  out.err = *out.err_product;
  if (c.next_degree) {
    out.err_remainder = remainder_route(c, m, UA);
    if (out.err_remainder) {
      if (!out.err_product->overlaps(*out.err_remainder)) {
        throw Error("approx_pair: product and remainder enclosures disagree at k=" + std::to_string(k) +
                    ", m=" + std::to_string(m));
      }
      out.err = out.err_product->intersect(*out.err_remainder);
    }
  }

  if (out.err.excludes_zero() && abs(out.q_reduced) >= 2) {
    const Interval err_reduced = out.err * Interval::point(scale, kLogBits);
    const Interval lq = log2_abs(Rat(out.q_reduced), kLogBits);
    out.local_exponent = Interval::point(Rat(1), kLogBits) - log2(err_reduced) / lq;
    out.resolved = true;
  }
  return out;
}

RatioReport Approximations::lemma4(int k, int m_lo, int m_hi, double band_lo, double band_hi) {
  RatioReport rep;
  rep.k = k;
  rep.band_lo = band_lo;
  rep.band_hi = band_hi;
  if (m_hi < m_lo) throw Error("lemma4_ratio_check: empty m range");
  const Convergent c = convergent(k);
  rep.d_k = c.degree;
  if (!c.next_degree) {
    rep.vacuous = true;
    rep.pass = true;
    rep.in_band = true;
    rep.stable = true;
    rep.note = "f is rational; no convergent past k";
    return rep;
  }
  rep.d_next = *c.next_degree;
  const int d = sys_.d();
  const Interval lb = log2_abs(Rat(*sys_.b()), kLogBits);
  const Interval la = log2_abs(sys_.alpha(), kLogBits);
  const Interval lbeta = log2_abs(sys_.beta(), kLogBits);
  const Rat eq = sys_.rb_shift() + c.degree;
  const Rat ee = Rat(rep.d_next) - sys_.ra_shift();
  bool resolved = true;
  for (int m = m_lo; m <= m_hi; ++m) {
    const ApproxPair pr = pair(k, m);
    const Rat dm = Rat(ipow(Integer(d), static_cast<unsigned long>(m)));
    RatioRow row;
    row.m = m;
    const Interval lq = log2_abs(pr.q_val, kLogBits) - Interval::point(Rat(m), kLogBits) * lbeta -
                        Interval::point(dm * eq, kLogBits) * lb;
    row.log2_ratio_q = lq.mid_double();
    if (pr.err.excludes_zero()) {
      const Interval le = log2(pr.err) - Interval::point(Rat(m), kLogBits) * la + Interval::point(dm * ee, kLogBits) * lb;
      row.log2_ratio_err = le.mid_double();
    } else {
      resolved = false;
      row.log2_ratio_err = NAN;
    }
    rep.rows.push_back(row);
  }
  auto stats = [&](auto get, double& mn, double& mx, double& drift) {
    double lmn = INFINITY;
    double lmx = -INFINITY;
    for (const auto& r : rep.rows) {
      lmn = std::min(lmn, get(r));
      lmx = std::max(lmx, get(r));
    }
    mn = std::exp2(lmn);
    mx = std::exp2(lmx);
    const std::size_t n = rep.rows.size();
    const std::size_t tail = std::min(n, std::max<std::size_t>(2, (n + 3) / 4));
    double tmn = INFINITY;
    double tmx = -INFINITY;
    for (std::size_t i = n - tail; i < n; ++i) {
      tmn = std::min(tmn, get(rep.rows[i]));
      tmx = std::max(tmx, get(rep.rows[i]));
    }
    drift = 1 - std::exp2(tmn - tmx);
    return std::log2(band_lo) <= lmn && lmx <= std::log2(band_hi);
  };
  const bool band_q = stats([](const RatioRow& r) { return r.log2_ratio_q; }, rep.min_ratio_q, rep.max_ratio_q, rep.drift_q);
  bool band_e = false;
  if (resolved) {
    band_e = stats([](const RatioRow& r) { return r.log2_ratio_err; }, rep.min_ratio_err, rep.max_ratio_err, rep.drift_err);
  } else {
    rep.note = "error not resolved at some m";
  }
  rep.in_band = band_q && band_e;
  rep.stable = resolved && rep.drift_q < 0.05 && rep.drift_err < 0.05;
  rep.pass = rep.in_band && rep.stable;
  return rep;
}

EmpiricalMu Approximations::empirical_mu(int k_max, int m_max) {
  EmpiricalMu out;
  for (int k = 1; k <= k_max; ++k) {
    try {
      (void)convergent(k);
    } catch (const UncertifiedInput&) {
      if (cf_.is_rational) break;
      throw;
    }
    for (int m = 0; m <= m_max; ++m) {
      ApproxPair pr = pair(k, m);
      if (pr.exact_hit) {
        out.rational_suspected = true;
      } else if (!pr.resolved) {
        ++out.unresolved;
      } else {
        if (!out.grid_max || mpfr_greater_p(pr.local_exponent.lo(), out.grid_max->lo())) out.grid_max = pr.local_exponent;
        if (m == m_max && (!out.value || mpfr_greater_p(pr.local_exponent.lo(), out.value->lo()))) {
          out.value = pr.local_exponent;
          out.best_k = k;
          out.best_m = m;
        }
      }
      out.grid.push_back(std::move(pr));
    }
  }
  return out;
}

ApproxPair approx_pair(const MahlerSystem& sys, int k, int m, int bits) { return Approximations(sys, bits).pair(k, m); }

RatioReport lemma4_ratio_check(const MahlerSystem& sys, int k, int m_lo, int m_hi, int bits) {
  return Approximations(sys, bits).lemma4(k, m_lo, m_hi);
}

EmpiricalMu empirical_mu(const MahlerSystem& sys, int bits, int k_max, int m_max) {
  return Approximations(sys, bits).empirical_mu(k_max, m_max);
}

}  // namespace mahler

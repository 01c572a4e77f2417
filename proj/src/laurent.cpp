#include "mahler/laurent.hpp"

#include <algorithm>
#include <string>

#include "mahler/errors.hpp"

namespace mahler {

MahlerSystem::MahlerSystem(Poly A, Poly B, int d, std::optional<Integer> b)
    : A_(std::move(A)), B_(std::move(B)), d_(d), b_(std::move(b)) {
  if (A_.is_zero() || B_.is_zero()) throw DegenerateSystem("A and B must be nonzero");
  if (d_ < 2) throw DegenerateSystem("d must be at least 2, got " + std::to_string(d_));
  if (b_ && abs(*b_) < 2) throw DegenerateSystem("|b| must be at least 2");
  const Poly g = gcd(A_, B_);
  if (g.degree() > 0) {
    A_ = exact_div(A_, g);
    B_ = exact_div(B_, g);
  }
  if (A_.lead() != B_.lead()) {
    throw NoLaurentSolution("leading coefficients differ (" + to_string(A_.lead()) + " vs " +
                            to_string(B_.lead()) + "); no Laurent solution in 1/z");
  }
  if ((rb() - ra()) % (d_ - 1) != 0) {
    throw NoLaurentSolution("d - 1 = " + std::to_string(d_ - 1) + " does not divide deg B - deg A = " +
                            std::to_string(rb() - ra()));
  }
}

Rat MahlerSystem::big_gap_threshold() const { return make_rat(ra() + rb(), d_ - 1); }

bool MahlerSystem::hypothesis_holds() const {
  if (!b_) throw Error("hypothesis_holds: no evaluation point b");
  const Rat bound = std::max(cauchy_root_bound(A_), cauchy_root_bound(B_));
  Integer x = *b_;
  while (Rat(abs(x)) <= bound) {
    if (eval_int(A_, x) == 0 || eval_int(B_, x) == 0) return false;
    Integer next;
    mpz_pow_ui(next.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(d_));
    x = next;
  }
  return true;
}

Rat LaurentSeries::coeff_at(int e) const {
  if (e > top) return Rat(0);
  if (e < lowest_known()) {
    if (exact) return Rat(0);
    throw InsufficientPrecision("coefficient of z^" + std::to_string(e) + " is beyond the known range");
  }
  return coeffs[static_cast<std::size_t>(top - e)];
}

LaurentSeries solve_mahler(const MahlerSystem& sys, int n_terms) {
  if (n_terms < 1) throw Error("solve_mahler: n_terms must be >= 1");
  const int ra = sys.ra();
  const int rb = sys.rb();
  const int d = sys.d();
  // Reversed, normalized coefficients: A(z) = alpha z^{ra} sum_j ar[j] z^{-j}.
  std::vector<Rat> ar(static_cast<std::size_t>(ra) + 1);
  std::vector<Rat> br(static_cast<std::size_t>(rb) + 1);
  for (int j = 0; j <= ra; ++j) ar[static_cast<std::size_t>(j)] = sys.A().coeff(static_cast<std::size_t>(ra - j)) / sys.alpha();
  for (int j = 0; j <= rb; ++j) br[static_cast<std::size_t>(j)] = sys.B().coeff(static_cast<std::size_t>(rb - j)) / sys.beta();

  // With w = 1/z and f = z^h F(w): F(w) * sum br_j w^j = F(w^d) * sum ar_j w^j.
  std::vector<Rat> c(static_cast<std::size_t>(n_terms));
  c[0] = 1;
  Rat t;
  for (int i = 1; i < n_terms; ++i) {
    Rat acc = 0;
    for (int l = std::max(0, (i - ra + d - 1) / d); d * l <= i; ++l) {
      const Rat& a = ar[static_cast<std::size_t>(i - d * l)];
      if (a == 0) continue;
      mpq_mul(t.get_mpq_t(), a.get_mpq_t(), c[static_cast<std::size_t>(l)].get_mpq_t());
      acc += t;
    }
    for (int j = 1; j <= std::min(rb, i); ++j) {
      const Rat& bj = br[static_cast<std::size_t>(j)];
      if (bj == 0) continue;
      mpq_mul(t.get_mpq_t(), bj.get_mpq_t(), c[static_cast<std::size_t>(i - j)].get_mpq_t());
      acc -= t;
    }
    c[static_cast<std::size_t>(i)] = std::move(acc);
  }

  LaurentSeries f{sys.top(), std::move(c), false};
  for (const auto& r : defining_equation_residual(sys, f)) {
    if (r != 0) throw Error("solve_mahler: internal error, defining equation not satisfied");
  }
  return f;
}

std::vector<Rat> defining_equation_residual(const MahlerSystem& sys, const LaurentSeries& f) {
  // B f is determined for exponents >= lowest_known + r_b; A f(z^d) for
  // exponents >= d * lowest_known + r_a, which is never the binding limit.
  const int hi = f.top + sys.rb();
  const int lo = f.lowest_known() + sys.rb();
  std::vector<Rat> out;
  out.reserve(static_cast<std::size_t>(std::max(0, hi - lo + 1)));
  const int d = sys.d();
  for (int e = hi; e >= lo; --e) {
    Rat acc = 0;
    for (int j = 0; j <= sys.rb(); ++j) {
      const Rat& bj = sys.B().coeffs()[static_cast<std::size_t>(j)];
      if (bj != 0) acc += bj * f.coeff_at(e - j);
    }
    for (int j = 0; j <= sys.ra(); ++j) {
      const Rat& aj = sys.A().coeffs()[static_cast<std::size_t>(j)];
      const int k = e - j;
      if (aj == 0 || k % d != 0) continue;
      acc -= aj * f.coeff_at(k / d);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

bool satisfies_functional_equation(const MahlerSystem& sys, const Poly& p, const Poly& q) {
  if (q.is_zero()) return false;
  const auto d = static_cast<unsigned long>(sys.d());
  return sys.B() * p * substitute_power(q, d) == sys.A() * substitute_power(p, d) * q;
}

SeriesEnclosure series_eval_tail(const LaurentSeries& f, const Rat& x, int tail_bound_exponent) {
  if (abs(x) < 2) throw Error("series_eval_tail: |x| must be at least 2");
  if (f.valid() < 1) throw InsufficientPrecision("series_eval_tail: empty series");
  // Horner in 1/x over the stored coefficients, then scale by x^top.
  const Rat w = 1 / x;
  Rat acc = 0;
  for (std::size_t i = f.coeffs.size(); i-- > 0;) acc = acc * w + f.coeffs[i];
  Rat scale = 1;
  const Rat base = f.top >= 0 ? x : w;
  for (int i = 0; i < std::abs(f.top); ++i) scale *= base;
  const Rat center = acc * scale;
  if (f.exact) return {center, center, true};

  Rat radius = 1;
  const int e = f.top - f.valid() + 1;
  const Rat ax = abs(x);
  for (int i = 0; i < std::abs(e); ++i) {
    if (e >= 0) radius *= ax; else radius /= ax;
  }
  Rat factor = 1;
  for (int i = 0; i < std::abs(tail_bound_exponent); ++i) {
    if (tail_bound_exponent >= 0) factor *= 2; else factor /= 2;
  }
  radius *= factor;
  return {center - radius, center + radius, false};
}

}  // namespace mahler

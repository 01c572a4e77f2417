#include <random>

#include "doctest.h"
#include "mahler/errors.hpp"
#include "mahler/numeric.hpp"
#include "mahler/presets.hpp"
#include "test_support.hpp"

using namespace mahler;
using mahler::testing::P;

namespace {

Rat pow2(int e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(std::abs(e)));
  return e >= 0 ? Rat(p) : Rat(1 / Rat(p));
}

// For B = 1 and deg A < d, f = z^{-1} prod_t A~(z^{-d^t}) and c_i is the product
// of the normalized reversed coefficients of A over the base-d digits of i.
Rat digit_coefficient(const std::vector<Rat>& a, int d, int i) {
  Rat c = 1;
  while (i > 0) {
    const int digit = i % d;
    if (digit >= static_cast<int>(a.size())) return 0;
    c *= a[static_cast<std::size_t>(digit)];
    i /= d;
  }
  return c;
}

}  // namespace

TEST_CASE("interval arithmetic") {
  const Interval a(Rat(1), Rat(2), 64);
  const Interval b(Rat(-3), Rat(1), 64);
  CHECK((a + b).contains(Rat(-1)));
  CHECK((a * b).contains(Rat(-6)));
  CHECK((a * b).contains(Rat(2)));
  CHECK(!(a * b).contains(Rat(3)));
  CHECK((a - a).contains(Rat(0)));
  CHECK_THROWS_AS((void)(a / b), DivisionByZero);
  CHECK((a / a).contains(Rat(1) / 2));
  const Interval third = Interval::point(make_rat(1, 3), 64);
  CHECK(third.contains(make_rat(1, 3)));
  CHECK(third.width() > 0);
  CHECK(log2(Interval(Rat(8), Rat(8), 64)).contains(Rat(3)));
  CHECK(log2_abs(Rat(-1024), 64).contains(Rat(10)));
  CHECK(!Interval(Rat(0), Rat(1), 64).excludes_zero());
  CHECK_THROWS_AS((void)Interval(Rat(0), Rat(1), 64).intersect(Interval(Rat(2), Rat(3), 64)), Error);
}

TEST_CASE("rational values") {
  const MahlerSystem g11(P({1, 1, 1}), P({1}), 3, Integer(2));
  const ValueEstimate v = eval_mahler_value(g11, 256);
  CHECK(v.value.contains(Rat(1)));
  CHECK(v.value.log2_width() <= -(256 - kGuardBits));

  const MahlerSystem g00(P({0, 0, 1}), P({1}), 3, Integer(3));
  CHECK(eval_mahler_value(g00, 128).value.contains(make_rat(1, 3)));

  CHECK_THROWS_AS((void)eval_mahler_value(family_b(2), 128), HypothesisViolated);
  CHECK_THROWS_AS((void)eval_mahler_value(MahlerSystem(P({1, 1, 1}), P({1}), 3), 128), Error);
}

TEST_CASE("family (a) value against a digit-product oracle") {
  const MahlerSystem a = family_a(2);
  const std::vector<Rat> ar = {Rat(1), Rat(2), Rat(4)};
  // |c_i| <= 4^{digits} <= 4 i^{log_3 4} < 4 i^2, and the tail from N = 10^4
  // is below 2^{-9000}.
  constexpr int N = 10000;
  Rat S = 0;
  for (int i = N; i-- > 0;) S = S / 2 + digit_coefficient(ar, 3, i);
  S /= 2;  // leading z^{-1}
  const Rat tail = pow2(-9000);
  const Interval oracle(S - tail, S + tail, 512);
  const ValueEstimate v = eval_mahler_value(a, 256);
  CHECK(v.value.contains(S));
  CHECK(oracle.overlaps(v.value));

  // The heuristic enclosure of the truncated series at x = 2.
  const SeriesEnclosure e = series_eval_tail(solve_mahler(a, 50), Rat(2), 12);
  CHECK(e.lo <= v.lo);
  CHECK(v.hi <= e.hi);
}

TEST_CASE("refinement stays inside") {
  for (const auto& sys : {family_a(3), family_c(-1), family_b(1)}) {
    const ValueEstimate lo = eval_mahler_value(sys, 128);
    const ValueEstimate hi = eval_mahler_value(sys, 1024);
    CHECK(lo.value.contains(hi.value));
    CHECK(hi.value.log2_width() <= -(1024 - kGuardBits));
  }
}

TEST_CASE("coefficient bound holds beyond the prefix") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-4, 4);
  int tried = 0;
  while (tried < 12) {
    const int d = 2 + static_cast<int>(rng() % 2);
    Poly A = P({coef(rng), coef(rng), 1});
    Poly B = d == 3 ? P({1}) : P({coef(rng), 1});
    if (A.degree() != 2) continue;
    std::optional<MahlerSystem> sys;
    try {
      sys.emplace(d == 3 ? A : P({coef(rng), 1}), B, d);
    } catch (const Error&) {
      continue;
    }
    ++tried;
    const LaurentSeries short_f = solve_mahler(*sys, 40);
    const CoefficientBound cb = coefficient_bound(*sys, short_f);
    const LaurentSeries long_f = solve_mahler(*sys, 400);
    Rat Kp = 1;
    for (const Rat& c : long_f.coeffs) {
      CHECK(abs(c) <= cb.C * Kp);
      Kp *= cb.K;
    }
  }
}

TEST_CASE("approximation pairs") {
  const MahlerSystem a = family_a(2);
  Approximations ctx(a, 512);
  const ApproxPair p0 = ctx.pair(1, 0);
  CHECK(p0.q_val == eval_int(ctx.convergent(1).q, Integer(2)));
  CHECK(p0.p_val == eval_int(ctx.convergent(1).p, Integer(2)));
  CHECK(ctx.pair(1, 1).q_val == 6);

  Approximations cctx(family_c(1), 512);
  CHECK(cctx.convergent(5).degree == 5);
  CHECK(cctx.pair(5, 1).q_val == 29127);

  CHECK_THROWS_AS((void)ctx.pair(1, -1), Error);
}

TEST_CASE("product and remainder routes agree") {
  int both = 0;
  for (const auto& sys : {family_a(2), family_b(1), family_c(1)}) {
    Approximations ctx(sys, 2048);
    for (int k = 1; k <= 4; ++k) {
      for (int m = 0; m <= 4; ++m) {
        const ApproxPair p = ctx.pair(k, m);
        if (p.err_product && p.err_remainder) {
          CHECK(p.err_product->overlaps(*p.err_remainder));
          if (p.err_product->excludes_zero()) ++both;
        }
      }
    }
  }
  CHECK(both > 10);
}

TEST_CASE("convergent growth ratios") {
  CHECK(lemma4_ratio_check(family_a(2), 1, 1, 6).pass);
  const RatioReport c = lemma4_ratio_check(family_c(1), 5, 1, 5);
  CHECK(c.d_k == 5);
  CHECK(c.d_next == 8);
  CHECK(c.pass);
  const MahlerSystem g00(P({0, 0, 1}), P({1}), 3, Integer(2));
  const RatioReport v = lemma4_ratio_check(g00, 1, 1, 4, 256);
  CHECK(v.vacuous);
  CHECK(v.pass);
}

TEST_CASE("empirical exponent") {
  const EmpiricalMu a = empirical_mu(family_a(2), 4096, 4, 6);
  REQUIRE(a.value);
  CHECK(std::abs(a.value->mid_double() - 3.0) < 0.1);
  const EmpiricalMu c = empirical_mu(family_c(1), 4096, 4, 6);
  REQUIRE(c.value);
  CHECK(std::abs(c.value->mid_double() - 2.4) < 0.1);

  // Deeper layers approach the exact value.
  const EmpiricalMu a4 = empirical_mu(family_a(2), 4096, 4, 4);
  REQUIRE(a4.value);
  CHECK(std::abs(a.value->mid_double() - 3.0) <= std::abs(a4.value->mid_double() - 3.0));
  CHECK(a.value->mid_double() <= 3.0 + 0.1);

  const MahlerSystem g11(P({1, 1, 1}), P({1}), 3, Integer(2));
  const EmpiricalMu r = empirical_mu(g11, 256, 4, 3);
  CHECK(r.rational_suspected);
  CHECK(r.grid.front().exact_hit);
}

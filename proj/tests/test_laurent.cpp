#include "doctest.h"
#include "mahler/contfrac.hpp"
#include "mahler/errors.hpp"
#include "mahler/laurent.hpp"
#include "mahler/presets.hpp"
#include "test_support.hpp"

using namespace mahler;
using mahler::testing::P;

TEST_CASE("system validation") {
  CHECK_THROWS_AS(MahlerSystem(Poly{}, P({1}), 3), DegenerateSystem);
  CHECK_THROWS_AS(MahlerSystem(P({1, 1}), P({1}), 1), DegenerateSystem);
  CHECK_THROWS_AS(MahlerSystem(P({1, 0, 1}), P({1}), 3, Integer(1)), DegenerateSystem);
  CHECK_THROWS_AS(MahlerSystem(P({0, 0, 2}), P({1}), 3), NoLaurentSolution);
  CHECK_THROWS_AS(MahlerSystem(P({0, 1}), P({1}), 3), NoLaurentSolution);

  const MahlerSystem s = family_a(2);
  CHECK(s.ra() == 2);
  CHECK(s.rb() == 0);
  CHECK(s.top() == -1);
  CHECK(s.big_gap_threshold() == 1);
  CHECK(s.hypothesis_holds());
}

TEST_CASE("common factors of A and B are cancelled") {
  // A = (z+1)(z+2), B = (z+1): same quotient as A = z+2, B = 1.
  const MahlerSystem s(P({1, 1}) * P({2, 1}), P({1, 1}), 2);
  CHECK(s.A() == P({2, 1}));
  CHECK(s.B() == P({1}));
}

TEST_CASE("hypothesis check finds vanishing points") {
  // A = z^2 - 4 vanishes at b = 2.
  const MahlerSystem s(P({-4, 0, 1}), P({1}), 3, Integer(2));
  CHECK_FALSE(s.hypothesis_holds());
  // A = z^2 - 64 vanishes at 2^{3} = 8.
  const MahlerSystem t(P({-64, 0, 1}), P({1}), 3, Integer(2));
  CHECK_FALSE(t.hypothesis_holds());
  const MahlerSystem u(P({-63, 0, 1}), P({1}), 3, Integer(2));
  CHECK(u.hypothesis_holds());
}

TEST_CASE("solve_mahler examples") {
  const LaurentSeries g11 = solve_mahler(MahlerSystem(P({1, 1, 1}), P({1}), 3), 5);
  CHECK(g11.top == -1);
  for (const auto& c : g11.coeffs) CHECK(c == 1);

  const LaurentSeries g00 = solve_mahler(MahlerSystem(P({0, 0, 1}), P({1}), 3), 12);
  CHECK(g00.coeffs[0] == 1);
  for (std::size_t i = 1; i < g00.coeffs.size(); ++i) CHECK(g00.coeffs[i] == 0);

  const LaurentSeries fa = solve_mahler(family_a(2), 10);
  const LaurentSeries r = convergent_residual(fa, P({1}), P({-2, 1}));
  CHECK(r.coeff_at(0) == 0);
  CHECK(r.coeff_at(-1) == 0);
  CHECK(r.coeff_at(-2) == 0);
  CHECK(r.coeff_at(-3) == -6);
}

TEST_CASE("property: the defining equation holds on the computed range") {
  for (long s = -3; s <= 3; ++s) {
    for (const MahlerSystem& sys : {family_a(s), family_b(s == 0 ? 1 : s)}) {
      const LaurentSeries f = solve_mahler(sys, 60);
      for (const auto& v : defining_equation_residual(sys, f)) CHECK(v == 0);
    }
  }
  const MahlerSystem mixed(P({3, -1, 0, 2}), P({1, 5, 2}), 2);
  const LaurentSeries f = solve_mahler(mixed, 50);
  CHECK(f.top == -1);
  for (const auto& v : defining_equation_residual(mixed, f)) CHECK(v == 0);
}

TEST_CASE("property: longer solves extend shorter ones") {
  const MahlerSystem sys = family_c(1);
  const LaurentSeries a = solve_mahler(sys, 30);
  const LaurentSeries b = solve_mahler(sys, 45);
  for (int i = 0; i < 30; ++i) CHECK(a.coeffs[static_cast<std::size_t>(i)] == b.coeffs[static_cast<std::size_t>(i)]);
}

TEST_CASE("property: family (a) z^-3 coefficient is s - s^3") {
  for (long s = -3; s <= 3; ++s) {
    const LaurentSeries f = solve_mahler(family_a(s), 12);
    const LaurentSeries r = convergent_residual(f, P({1}), P({-s, 1}));
    CHECK(r.coeff_at(-1) == 0);
    CHECK(r.coeff_at(-2) == 0);
    CHECK(r.coeff_at(-3) == Rat(s - s * s * s));
  }
}

TEST_CASE("coefficients below the known range") {
  LaurentSeries f{-1, {Rat(1), Rat(2)}, false};
  CHECK(f.coeff_at(5) == 0);
  CHECK(f.coeff_at(-2) == 2);
  CHECK_THROWS_AS((void)f.coeff_at(-3), InsufficientPrecision);
  f.exact = true;
  CHECK(f.coeff_at(-3) == 0);
}

TEST_CASE("series_eval_tail") {
  const LaurentSeries inv{-1, {Rat(1)}, true};
  const SeriesEnclosure e = series_eval_tail(inv, Rat(2), 0);
  CHECK(e.lo == Rat(1, 2));
  CHECK(e.hi == Rat(1, 2));
  CHECK(e.rigorous);

  const LaurentSeries geo{-1, std::vector<Rat>(20, Rat(1)), false};
  const SeriesEnclosure g = series_eval_tail(geo, Rat(2), 1);
  CHECK(g.lo <= 1);
  CHECK(g.hi >= 1);
  CHECK_FALSE(g.rigorous);
  CHECK_THROWS(series_eval_tail(geo, Rat(1), 0));
}

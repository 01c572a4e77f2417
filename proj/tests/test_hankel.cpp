#include "doctest.h"
#include "mahler/contfrac.hpp"
#include "mahler/errors.hpp"
#include "mahler/hankel.hpp"
#include "mahler/presets.hpp"
#include "test_support.hpp"

using namespace mahler;
using mahler::testing::P;

TEST_CASE("bareiss") {
  CHECK(bareiss_det({}) == 1);
  CHECK(bareiss_det({{Integer(7)}}) == 7);
  CHECK(bareiss_det({{Integer(0), Integer(1)}, {Integer(1), Integer(0)}}) == -1);
  CHECK(bareiss_det({{Integer(2), Integer(3), Integer(1)}, {Integer(4), Integer(1), Integer(5)}, {Integer(6), Integer(2), Integer(1)}}) == 62);
  CHECK(bareiss_det({{Integer(1), Integer(2)}, {Integer(2), Integer(4)}}) == 0);
}

TEST_CASE("geometric series") {
  const MahlerSystem g11(P({1, 1, 1}), P({1}), 3);
  const HankelReport r = hankel_dets(solve_mahler(g11, 10), 4);
  CHECK(r.at(1) == 1);
  CHECK(r.at(2) == 0);
  CHECK(r.support() == std::vector<int>{1});
}

TEST_CASE("family (a) first determinant") {
  const HankelReport r = hankel_dets(solve_mahler(family_a(2), 5), 1);
  CHECK(r.at(1) == 1);
}

TEST_CASE("family (c) determinants") {
  const LaurentSeries f = solve_mahler(family_c(1), 29);
  const HankelReport r = hankel_dets(f, 15);
  for (int n = 8; n <= 15; ++n) CHECK(r.nonzero[static_cast<std::size_t>(n - 1)]);
  CHECK_THROWS_AS((void)hankel_dets(solve_mahler(family_c(1), 28), 15), InsufficientPrecision);
  // Stable under more precision and under threading.
  const HankelReport r2 = hankel_dets(solve_mahler(family_c(1), 60), 15, 3);
  CHECK(r2.values == r.values);
}

TEST_CASE("support agrees with Phi") {
  for (const auto& sys : {family_a(2), family_a(-3), family_b(1), family_c(1), family_c(-1)}) {
    const LaurentSeries f = solve_mahler(sys, 80);
    const std::vector<int> phi = phi_prefix(f, 20);
    CHECK(hankel_dets(f, 20).support() == phi);
  }
}

TEST_CASE("polynomial part is ignored") {
  // z + 1/(z - 1): the same negative-power coefficients as 1/(z - 1).
  LaurentSeries f;
  f.top = 1;
  f.coeffs = {Rat(1), Rat(0)};
  for (int i = 0; i < 10; ++i) f.coeffs.emplace_back(1);
  CHECK(hankel_dets(f, 5).support() == std::vector<int>{1});
}

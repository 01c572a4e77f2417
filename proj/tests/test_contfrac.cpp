#include <random>

#include "doctest.h"
#include "mahler/contfrac.hpp"
#include "mahler/errors.hpp"
#include "mahler/presets.hpp"
#include "test_support.hpp"

using namespace mahler;
using mahler::testing::euclid_quotients;
using mahler::testing::P;
using mahler::testing::random_poly;
using mahler::testing::rational_series;

namespace {

RationalityCheck feq_check(const MahlerSystem& sys) {
  return [&sys](const Poly& p, const Poly& q) { return satisfies_functional_equation(sys, p, q); };
}

}  // namespace

TEST_CASE("rational Mahler function terminates") {
  const MahlerSystem g11(P({1, 1, 1}), P({1}), 3);
  const LaurentSeries f = solve_mahler(g11, 20);
  const CfExpansion cf = cf_expand(f, 10, feq_check(g11));
  REQUIRE(cf.quotients.size() == 2);
  CHECK(cf.quotients[0].is_zero());
  CHECK(cf.quotients[1] == P({-1, 1}));
  CHECK(cf.is_rational);
  CHECK(cf.complete_through == kUnbounded);
  CHECK(cf.phi == std::vector<int>{1});

  // Without a proof the vanishing residual is inconclusive.
  const CfExpansion weak = cf_expand(f, 10);
  CHECK_FALSE(weak.is_rational);
  CHECK_FALSE(weak.convergents.back().certified);
  CHECK(weak.complete_through == 1);
}

TEST_CASE("exact Laurent polynomial") {
  const LaurentSeries inv{-1, {Rat(1)}, true};
  const CfExpansion cf = cf_expand(inv, 4);
  CHECK(cf.is_rational);
  REQUIRE(cf.convergents.size() == 2);
  CHECK(cf.convergents[1].q == P({0, 1}));
  CHECK(cf.convergents[1].p == P({1}));

  const RemainderTop t = remainder_top_degree(inv, cf.convergents[0]);
  CHECK(t.next_degree == 1);
  CHECK(t.lead == 1);
}

TEST_CASE("family (a) first convergents") {
  const LaurentSeries f = solve_mahler(family_a(2), 40);
  const CfExpansion cf = cf_expand(f, 12);
  const Convergent* c1 = cf.by_degree(1);
  REQUIRE(c1 != nullptr);
  CHECK(c1->k == 1);
  CHECK(c1->p == P({1}));
  CHECK(c1->q == P({-2, 1}));
  CHECK(c1->certified);
  const RemainderTop t = remainder_top_degree(f, *c1);
  CHECK(t.next_degree == 3);
  CHECK(t.lead == -6);
  CHECK(*c1->next_degree == 3);
  CHECK(*c1->residual_lead == -6);
}

TEST_CASE("family (b) remainder of the degree 2 convergent") {
  const LaurentSeries f = solve_mahler(family_b(1), 40);
  const CfExpansion cf = cf_expand(f, 12);
  const Convergent* c = cf.by_degree(2);
  REQUIRE(c != nullptr);
  const RemainderTop t = remainder_top_degree(f, *c);
  CHECK(t.next_degree == 5);
  CHECK(t.lead == -3);
}

TEST_CASE("family (c) degree 5 convergent") {
  const LaurentSeries f = solve_mahler(family_c(1), 40);
  const CfExpansion cf = cf_expand(f, 12);
  const Convergent* c = cf.by_degree(5);
  REQUIRE(c != nullptr);
  CHECK(c->q == P({-1, 1, -1, 1, -1, 1}));
  CHECK(c->p == P({2, 2, 0, 1, 1}));
}

TEST_CASE("phi prefixes") {
  CHECK(phi_prefix(solve_mahler(family_a(2), 40), 8) == std::vector<int>{1, 3, 7});
  CHECK(phi_prefix(solve_mahler(family_c(1), 40), 8) == std::vector<int>{1, 2, 3, 4, 5, 8});
  CHECK(phi_prefix(solve_mahler(family_b(1), 40), 6) == std::vector<int>{1, 2, 5, 6});
  CHECK_THROWS_AS(phi_prefix(solve_mahler(family_c(1), 12), 20), InsufficientPrecision);
}

TEST_CASE("too few coefficients") {
  // Only the constant term is known, so nothing certifies past it.
  const LaurentSeries f{0, {Rat(1)}, false};
  CHECK_THROWS_AS(cf_expand(f, 4), InsufficientPrecision);
}

TEST_CASE("certification rule") {
  const LaurentSeries f = solve_mahler(family_c(1), 60);
  const CfExpansion cf = cf_expand(f, 100);
  const int M = -f.lowest_known();
  for (const auto& c : cf.convergents) {
    if (c.certified && c.next_degree) CHECK(c.degree + *c.next_degree <= M);
  }
  // Longer series never disagree.
  const CfExpansion more = cf_expand(solve_mahler(family_c(1), 120), 100);
  for (const auto& c : cf.convergents) {
    if (!c.certified) continue;
    const Convergent* o = more.by_degree(c.degree);
    REQUIRE(o != nullptr);
    CHECK(o->p == c.p);
    CHECK(o->q == c.q);
    CHECK(o->next_degree == c.next_degree);
  }
}

TEST_CASE("property: convergent identities") {
  for (const MahlerSystem& sys : {family_a(2), family_b(2), family_c(-1), family_a(-3)}) {
    const LaurentSeries f = solve_mahler(sys, 90);
    const CfExpansion cf = cf_expand(f, 60);
    for (std::size_t k = 1; k < cf.convergents.size(); ++k) {
      const Convergent& a = cf.convergents[k - 1];
      const Convergent& b = cf.convergents[k];
      CHECK(b.degree > a.degree);
      CHECK(b.degree == a.degree + cf.quotients[k].degree());
      const Poly det = b.p * a.q - a.p * b.q;
      CHECK(det.degree() == 0);
      CHECK(gcd(b.p.is_zero() ? P({1}) : b.p, b.q) == P({1}));
      if (a.next_degree) CHECK(*a.next_degree == b.degree);
    }
    for (const auto& c : cf.convergents) {
      if (!c.certified || !c.next_degree) continue;
      // p/q agrees with f above exponent -(d_k + d_{k+1}).
      const LaurentSeries s = rational_series(c.p, c.q, f.valid() + 5);
      for (int e = f.top; e > -(c.degree + *c.next_degree); --e) CHECK(s.coeff_at(e) == f.coeff_at(e));
      CHECK(s.coeff_at(-(c.degree + *c.next_degree)) != f.coeff_at(-(c.degree + *c.next_degree)));
    }
  }
}

TEST_CASE("property: agrees with the Euclidean algorithm on rational functions") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    const Poly q = random_poly(rng, 1 + trial % 8);
    const Poly p = random_poly(rng, trial % 10);
    const Poly g = gcd(p, q);
    const Poly pr = exact_div(p, g);
    const Poly qr = exact_div(q, g);
    const LaurentSeries f = rational_series(pr, qr, 40);
    if (f.valid() < 1) continue;
    const std::vector<Poly> expected = euclid_quotients(pr, qr);
    const auto check = [&](const Poly& a, const Poly& b) { return a * qr == b * pr; };
    const CfExpansion cf = cf_expand(f, 8, check);
    CHECK(cf.is_rational);
    REQUIRE(cf.quotients.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(cf.quotients[i] == expected[i]);
    CHECK(cf.convergents.back().q == qr.monic());
  }
}

#include <numeric>
#include <thread>

#include "doctest.h"
#include "mahler/cyclotomic.hpp"
#include "mahler/errors.hpp"
#include "test_support.hpp"

using namespace mahler;
using mahler::testing::P;

namespace {

std::int64_t naive_totient(std::int64_t n) {
  std::int64_t t = 0;
  for (std::int64_t k = 1; k <= n; ++k) t += std::gcd(k, n) == 1 ? 1 : 0;
  return t;
}

}  // namespace

TEST_CASE("rad and split") {
  CHECK(rad(12) == 6);
  CHECK(rad(1) == 1);
  CHECK(rad(9) == 3);
  const CycloIndexSplit a = split(12, 10);
  CHECK(a.r == 3);
  CHECK(a.s == 4);
  const CycloIndexSplit b = split(6, 2);
  CHECK(b.r == 3);
  CHECK(b.s == 2);
  for (std::int64_t n = 1; n <= 40; ++n) {
    const CycloIndexSplit c = split(n, 1);
    CHECK(c.r == n);
    CHECK(c.s == 1);
  }
}

TEST_CASE("property: split is the maximal coprime divisor") {
  for (std::int64_t n = 1; n <= 120; ++n) {
    for (std::int64_t m = 1; m <= 30; ++m) {
      const CycloIndexSplit sp = split(n, m);
      CHECK(sp.r * sp.s == n);
      CHECK(std::gcd(sp.r, m) == 1);
      for (std::int64_t k : divisors(n)) {
        if (std::gcd(k, m) == 1) CHECK(k <= sp.r);
      }
      // every prime of s divides m
      std::int64_t s = sp.s;
      for (std::int64_t p = 2; p <= s; ++p) {
        if (s % p != 0) continue;
        CHECK(m % p == 0);
        while (s % p == 0) s /= p;
      }
    }
  }
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_poly(1) == P({-1, 1}));
  CHECK(cyclotomic_poly(2) == P({1, 1}));
  CHECK(cyclotomic_poly(6) == P({1, -1, 1}));
  CHECK(cyclotomic_poly(12) == P({1, 0, -1, 0, 1}));
  CHECK_THROWS_AS(cyclotomic_poly(kCyclotomicCap + 1), CapExceeded);
  // Phi_105 is the first with a coefficient -2.
  const Poly p105 = cyclotomic_poly(105);
  CHECK(p105.coeff(7) == -2);
}

TEST_CASE("property: z^n - 1 is the product over divisors, degree is totient") {
  for (std::int64_t n = 1; n <= 60; ++n) {
    Poly prod{1};
    for (std::int64_t k : divisors(n)) prod = prod * cyclotomic_poly(k);
    CHECK(prod == Poly::monomial(Rat(1), static_cast<std::size_t>(n)) - Poly{1});
    CHECK(cyclotomic_poly(n).degree() == naive_totient(n));
    CHECK(totient(n) == naive_totient(n));
  }
}

TEST_CASE("decompose_cyclo_power examples") {
  CHECK(decompose_cyclo_power(1, 3) == std::vector<std::int64_t>{1, 3});
  CHECK(decompose_cyclo_power(2, 6) == std::vector<std::int64_t>{4, 12});
  CHECK(decompose_cyclo_power(6, 3) == std::vector<std::int64_t>{18});
}

TEST_CASE("property: decomposed indices keep r(k, d)") {
  for (std::int64_t n = 1; n <= 60; ++n) {
    for (std::int64_t d = 2; d <= 12; ++d) {
      for (std::int64_t k : decompose_cyclo_power(n, d)) CHECK(split(k, d).r == split(n, d).r);
    }
  }
}

TEST_CASE("sigma multiplicity") {
  CHECK(sigma_multiplicity(2, P({1, 2, 1})) == 2);
  CHECK(sigma_multiplicity(1, P({-1, 1, -1, 1, -1, 1})) == 1);
  CHECK(sigma_multiplicity(5, P({1, 1, 1})) == 0);
  CHECK(sigma_multiplicity(3, P({1, 1, 1}) * P({1, 1, 1}) * P({0, 1})) == 2);
}

TEST_CASE("reaches") {
  CHECK(reaches(3, 3) == 1);
  CHECK(reaches(1, 3) == 0);
  CHECK(reaches(12, 6) == 2);
  CHECK(reaches(9, 3) == 2);
  CHECK(reaches(5, 3) == 0);
  CHECK_THROWS_AS(reaches(kCyclotomicCap * 2, 3), CapExceeded);
}

TEST_CASE("property: reaches agrees with divisibility of z^(d^m) - 1 style brute force") {
  // Phi_n | Phi_r(z^{d^m}) checked by exact division for small cases.
  for (std::int64_t d = 2; d <= 4; ++d) {
    for (std::int64_t n = 1; n <= 30; ++n) {
      const std::int64_t r = split(n, d).r;
      const auto m = reaches(n, d);
      REQUIRE(m.has_value());
      Poly base = cyclotomic_poly(r);
      unsigned long e = 1;
      for (int i = 0; i < *m; ++i) e *= static_cast<unsigned long>(d);
      CHECK(divmod(substitute_power(base, e), cyclotomic_poly(n)).remainder.is_zero());
      if (*m > 0) {
        CHECK_FALSE(divmod(substitute_power(base, e / static_cast<unsigned long>(d)), cyclotomic_poly(n)).remainder.is_zero());
      }
    }
  }
}

TEST_CASE("split_cyclotomic") {
  const Poly q5 = P({-1, 1, -1, 1, -1, 1});
  const CyclotomicSplit s = split_cyclotomic(q5 * P({0, 0, 1}) * P({-2, 1}));
  CHECK(s.z_power == 2);
  REQUIRE(s.factors.size() == 3);
  CHECK(s.factors[0].index == 1);
  CHECK(s.factors[1].index == 3);
  CHECK(s.factors[2].index == 6);
  CHECK(s.rest == P({-2, 1}));
  const CyclotomicSplit t = split_cyclotomic(P({1, 2, 1}));
  REQUIRE(t.factors.size() == 1);
  CHECK(t.factors[0].index == 2);
  CHECK(t.factors[0].multiplicity == 2);
}

TEST_CASE("memo table is safe under concurrent readers") {
  std::vector<std::thread> workers;
  std::vector<int> ok(4, 0);
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([w, &ok] {
      bool good = true;
      for (std::int64_t n = 1; n <= 80; ++n) good = good && cyclotomic_poly(n).degree() == totient(n);
      ok[static_cast<std::size_t>(w)] = good ? 1 : 0;
    });
  }
  for (auto& t : workers) t.join();
  CHECK(std::accumulate(ok.begin(), ok.end(), 0) == 4);
}

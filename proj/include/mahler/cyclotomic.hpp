#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mahler/algebra.hpp"

namespace mahler {

/// Largest index accepted by cyclotomic_poly.
inline constexpr std::int64_t kCyclotomicCap = 100000;

struct CycloIndexSplit {
  std::int64_t n = 1;
  std::int64_t m = 1;
  /// Largest divisor of n coprime to m.
  std::int64_t r = 1;
  /// n / r; every prime of s divides m.
  std::int64_t s = 1;
};

/// Product of the distinct primes dividing n; rad(1) = 1.
std::int64_t rad(std::int64_t n);
CycloIndexSplit split(std::int64_t n, std::int64_t m);
std::int64_t totient(std::int64_t n);
std::int64_t moebius(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);

/// Phi_n. Memoized; concurrent callers are safe. Throws CapExceeded above kCyclotomicCap.
Poly cyclotomic_poly(std::int64_t n);

/// Indices k with Phi_n(z^d) = prod Phi_k(z): {r n s(d,n) : r | r(d,n)}, ascending.
std::vector<std::int64_t> decompose_cyclo_power(std::int64_t n, std::int64_t d);

/// Largest e with Phi_k^e dividing f. f must be nonzero.
int sigma_multiplicity(std::int64_t k, const Poly& f);

/// Smallest m with Phi_n | Phi_{r(n,d)}(z^{d^m}), or nullopt if no m exists.
/// Throws CapExceeded if n exceeds kCyclotomicCap.
std::optional<int> reaches(std::int64_t n, std::int64_t d);

/// Cyclotomic factors of f found by trial division with every Phi_n of degree
/// at most deg f, so the list is complete.
struct CyclotomicFactor {
  std::int64_t index = 1;
  int multiplicity = 0;
};
struct CyclotomicSplit {
  /// Power of z dividing f.
  int z_power = 0;
  std::vector<CyclotomicFactor> factors;
  /// f / (z^z_power * prod Phi^mult); no root is zero or a root of unity.
  Poly rest;
};
CyclotomicSplit split_cyclotomic(const Poly& f);

}  // namespace mahler

#pragma once

#include <vector>

#include "mahler/laurent.hpp"

namespace mahler {

/// H_n = det(c_{i+j-1})_{1<=i,j<=n} where c_i is the coefficient of z^{-i}.
struct HankelReport {
  int n_min = 1;
  int n_max = 0;
  /// values[n - n_min] = H_n.
  std::vector<Rat> values;
  std::vector<bool> nonzero;

  [[nodiscard]] const Rat& at(int n) const { return values.at(static_cast<std::size_t>(n - n_min)); }
  /// {n : H_n != 0}, ascending.
  [[nodiscard]] std::vector<int> support() const;
};

/// Exact H_1, ..., H_{n_max} of f. Only the coefficients of negative powers
/// enter, so the polynomial part of f (which does not change Phi) is
/// ignored. Throws InsufficientPrecision if a coefficient down to
/// z^{-(2 n_max - 1)} is unknown.
HankelReport hankel_dets(const LaurentSeries& f, int n_max, int jobs = 1);

/// Determinant of a square integer matrix by fraction-free elimination.
Integer bareiss_det(std::vector<std::vector<Integer>> m);

}  // namespace mahler

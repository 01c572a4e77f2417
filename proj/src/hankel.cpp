#include "mahler/hankel.hpp"

#include <algorithm>
#include <future>
#include <string>

#include "mahler/errors.hpp"

namespace mahler {

std::vector<int> HankelReport::support() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    if (nonzero[i]) out.push_back(n_min + static_cast<int>(i));
  }
  return out;
}

Integer bareiss_det(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = std::move(t);
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

HankelReport hankel_dets(const LaurentSeries& f, int n_max, int jobs) {
  if (n_max < 1) throw Error("hankel_dets: n_max must be >= 1");
  const int need = 2 * n_max - 1;
  if (!f.exact && f.lowest_known() > -need) {
    throw InsufficientPrecision("hankel_dets: need the coefficient of z^-" + std::to_string(need) +
                                ", series known down to z^" + std::to_string(f.lowest_known()));
  }
  // Clear denominators once: H_n(L c) = L^n H_n(c).
  std::vector<Rat> c(static_cast<std::size_t>(need) + 1);
  Integer L = 1;
  for (int i = 1; i <= need; ++i) {
    c[static_cast<std::size_t>(i)] = f.coeff_at(-i);
    mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), c[static_cast<std::size_t>(i)].get_den_mpz_t());
  }
  std::vector<Integer> ci(c.size());
  for (std::size_t i = 1; i < c.size(); ++i) {
    const Rat s = c[i] * L;
    ci[i] = s.get_num();
  }

  auto det_n = [&ci, &L](int n) {
    std::vector<std::vector<Integer>> m(static_cast<std::size_t>(n), std::vector<Integer>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = ci[static_cast<std::size_t>(i + j + 1)];
    }
    Integer Ln;
    mpz_pow_ui(Ln.get_mpz_t(), L.get_mpz_t(), static_cast<unsigned long>(n));
    return make_rat(bareiss_det(std::move(m)), Ln);
  };

  HankelReport r;
  r.n_max = n_max;
  r.values.resize(static_cast<std::size_t>(n_max));
  if (jobs > 1) {
    // Independent determinants, largest first so the batches balance.
    for (int hi = n_max; hi >= 1; hi -= jobs) {
      std::vector<std::future<Rat>> futs;
      for (int n = hi; n > std::max(0, hi - jobs); --n) futs.push_back(std::async(std::launch::async, det_n, n));
      int n = hi;
      for (auto& fu : futs) r.values[static_cast<std::size_t>(n-- - 1)] = fu.get();
    }
  } else {
    for (int n = 1; n <= n_max; ++n) r.values[static_cast<std::size_t>(n - 1)] = det_n(n);
  }
  for (const Rat& v : r.values) r.nonzero.push_back(v != 0);
  return r;
}

}  // namespace mahler

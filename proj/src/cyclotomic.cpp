#include "mahler/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <string>

#include "mahler/errors.hpp"

namespace mahler {

namespace {

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

void require_positive(std::int64_t n, const char* what) {
  if (n < 1) throw Error(std::string(what) + ": argument must be positive, got " + std::to_string(n));
}

std::mutex& memo_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::int64_t, Poly>& memo() {
  static std::map<std::int64_t, Poly> table;
  return table;
}

Poly compute_cyclotomic(std::int64_t n) {
  if (n == 1) return Poly{-1, 1};
  // prod_{e | n} (1 - z^e)^{mu(n/e)} as a power series truncated at phi(n).
  const auto deg = static_cast<std::size_t>(totient(n));
  std::vector<Integer> c(deg + 1);
  c[0] = 1;
  const auto ds = divisors(n);
  for (std::int64_t e : ds) {
    const std::int64_t mu = moebius(n / e);
    if (mu != 1) continue;
    const auto step = static_cast<std::size_t>(e);
    for (std::size_t i = deg; i >= step; --i) {
      c[i] -= c[i - step];
      if (i == step) break;
    }
  }
  for (std::int64_t e : ds) {
    if (moebius(n / e) != -1) continue;
    const auto step = static_cast<std::size_t>(e);
    for (std::size_t i = step; i <= deg; ++i) c[i] += c[i - step];
  }
  std::vector<Rat> out(deg + 1);
  for (std::size_t i = 0; i <= deg; ++i) out[i] = Rat(c[i]);
  return Poly(std::move(out));
}

}  // namespace

std::int64_t rad(std::int64_t n) {
  require_positive(n, "rad");
  std::int64_t r = 1;
  for (const auto& [p, e] : factorize(n)) r *= p;
  return r;
}

CycloIndexSplit split(std::int64_t n, std::int64_t m) {
  require_positive(n, "split");
  require_positive(m, "split");
  std::int64_t r = n;
  for (std::int64_t g = std::gcd(r, m); g > 1; g = std::gcd(r, m)) r /= g;
  return {n, m, r, n / r};
}

std::int64_t totient(std::int64_t n) {
  require_positive(n, "totient");
  std::int64_t t = n;
  for (const auto& [p, e] : factorize(n)) t = t / p * (p - 1);
  return t;
}

std::int64_t moebius(std::int64_t n) {
  require_positive(n, "moebius");
  std::int64_t mu = 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  require_positive(n, "divisors");
  std::vector<std::int64_t> out{1};
  for (const auto& [p, e] : factorize(n)) {
    const std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Poly cyclotomic_poly(std::int64_t n) {
  require_positive(n, "cyclotomic_poly");
  if (n > kCyclotomicCap) {
    throw CapExceeded("cyclotomic index " + std::to_string(n) + " exceeds cap " + std::to_string(kCyclotomicCap));
  }
  {
    const std::lock_guard<std::mutex> lock(memo_mutex());
    const auto it = memo().find(n);
    if (it != memo().end()) return it->second;
  }
  Poly p = compute_cyclotomic(n);
  const std::lock_guard<std::mutex> lock(memo_mutex());
  return memo().emplace(n, std::move(p)).first->second;
}

std::vector<std::int64_t> decompose_cyclo_power(std::int64_t n, std::int64_t d) {
  require_positive(n, "decompose_cyclo_power");
  if (d < 1) throw Error("decompose_cyclo_power: d must be positive");
  const CycloIndexSplit sp = split(d, n);
  std::vector<std::int64_t> out;
  for (std::int64_t r : divisors(sp.r)) out.push_back(r * n * sp.s);
  return out;
}

int sigma_multiplicity(std::int64_t k, const Poly& f) {
  if (f.is_zero()) throw Error("sigma_multiplicity: f must be nonzero");
  const Poly phi = cyclotomic_poly(k);
  int e = 0;
  Poly cur = f;
  while (cur.degree() >= phi.degree()) {
    auto [q, r] = divmod(cur, phi);
    if (!r.is_zero()) break;
    cur = std::move(q);
    ++e;
  }
  return e;
}

std::optional<int> reaches(std::int64_t n, std::int64_t d) {
  require_positive(n, "reaches");
  if (d < 2) throw Error("reaches: d must be at least 2");
  if (n > kCyclotomicCap) {
    throw CapExceeded("reaches: index " + std::to_string(n) + " exceeds cap " + std::to_string(kCyclotomicCap));
  }
  // Every index in a chain divides the next, so the search stays inside the
  // divisors of n and a repeated frontier means n is unreachable.
  std::set<std::int64_t> frontier{split(n, d).r};
  std::set<std::set<std::int64_t>> seen;
  for (int m = 0;; ++m) {
    if (frontier.count(n) != 0) return m;
    if (frontier.empty() || !seen.insert(frontier).second) return std::nullopt;
    std::set<std::int64_t> next;
    for (std::int64_t x : frontier) {
      for (std::int64_t k : decompose_cyclo_power(x, d)) {
        if (n % k == 0) next.insert(k);
      }
    }
    frontier = std::move(next);
  }
}

CyclotomicSplit split_cyclotomic(const Poly& f) {
  if (f.is_zero()) throw Error("split_cyclotomic: f must be nonzero");
  CyclotomicSplit out;
  std::size_t lowest = 0;
  while (f.coeffs()[lowest] == 0) ++lowest;
  out.z_power = static_cast<int>(lowest);
  Poly cur(std::vector<Rat>(f.coeffs().begin() + static_cast<std::ptrdiff_t>(lowest), f.coeffs().end()));
  // phi(n) >= sqrt(n / 2), so indices past 2 deg^2 cannot divide.
  const std::int64_t limit = 2 * static_cast<std::int64_t>(cur.degree()) * cur.degree() + 2;
  for (std::int64_t n = 1; n <= limit && cur.degree() > 0; ++n) {
    if (totient(n) > cur.degree()) continue;
    const int e = sigma_multiplicity(n, cur);
    if (e == 0) continue;
    const Poly phi = cyclotomic_poly(n);
    for (int i = 0; i < e; ++i) cur = exact_div(cur, phi);
    out.factors.push_back({n, e});
  }
  out.rest = std::move(cur);
  return out;
}

}  // namespace mahler

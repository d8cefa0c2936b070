#pragma once

// Independent reference implementations used by the tests. Deliberately naive.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint64_t totient(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k <= n; ++k)
    if (std::gcd(k, n) == 1) ++c;
  return c;
}

inline std::uint64_t sigma(std::uint64_t n) {
  std::uint64_t s = 0;
  for (std::uint64_t k = 1; k <= n; ++k)
    if (n % k == 0) s += k;
  return s;
}

/// Prime factors with multiplicity, ascending.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    while (n % d == 0) {
      out.push_back(d);
      n /= d;
    }
  if (n > 1) out.push_back(n);
  return out;
}

/// True iff for every prime p the offsets miss some class mod p.
inline bool admissible(const std::vector<std::int64_t>& b) {
  const std::uint64_t limit = std::max<std::uint64_t>(b.size() + 1, 50);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (!is_prime(p)) continue;
    std::vector<bool> seen(p, false);
    for (auto v : b) seen[static_cast<std::size_t>(((v % static_cast<std::int64_t>(p)) + p) % p)] = true;
    bool all = true;
    for (bool s : seen) all = all && s;
    if (all) return false;
  }
  return true;
}

} // namespace oracle

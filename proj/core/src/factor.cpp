#include "mftuple/factor.hpp"

#include <algorithm>
#include <map>

#include "mftuple/error.hpp"
#include "mftuple/primality.hpp"
#include "mftuple/sieve.hpp"

namespace mft {

std::string to_string(CofactorStatus s) {
  switch (s) {
  case CofactorStatus::unit: return "unit";
  case CofactorStatus::probable_prime: return "probable_prime";
  case CofactorStatus::composite_unfactored: return "composite_unfactored";
  }
  return "?";
}

FactoredInteger::FactoredInteger(std::vector<PrimePower> factors, BigInt cofactor,
                                 CofactorStatus status)
    : cofactor_(std::move(cofactor)), status_(status) {
  std::map<BigInt, unsigned> merged;
  for (auto& f : factors) {
    if (f.exponent == 0) continue;
    if (!is_prime(f.prime).is_prime())
      throw InvalidArgument("FactoredInteger: " + f.prime.get_str() + " is not prime");
    merged[f.prime] += f.exponent;
  }
  for (auto& [p, e] : merged) factors_.push_back({p, e});

  switch (status_) {
  case CofactorStatus::unit:
    if (cofactor_ != 1) throw InvalidArgument("FactoredInteger: unit cofactor must be 1");
    break;
  case CofactorStatus::probable_prime:
    if (!is_prime(cofactor_).is_prime())
      throw InvalidArgument("FactoredInteger: cofactor " + cofactor_.get_str() +
                            " is not a probable prime");
    if (merged.contains(cofactor_))
      throw InvalidArgument("FactoredInteger: probable-prime cofactor repeats a listed prime");
    break;
  case CofactorStatus::composite_unfactored:
    if (cofactor_ < 2) throw InvalidArgument("FactoredInteger: unfactored cofactor must exceed 1");
    break;
  }

  value_ = cofactor_;
  BigInt pk;
  for (const auto& f : factors_) {
    mpz_pow_ui(pk.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
    value_ *= pk;
  }
}

bool FactoredInteger::squarefree() const {
  if (status_ == CofactorStatus::composite_unfactored) return false;
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const PrimePower& f) { return f.exponent == 1; });
}

std::vector<PrimePower> FactoredInteger::all_prime_powers() const {
  if (status_ == CofactorStatus::composite_unfactored)
    throw Error("cannot evaluate multiplicative function on partial factorization");
  std::vector<PrimePower> out = factors_;
  if (status_ == CofactorStatus::probable_prime) {
    out.push_back({cofactor_, 1});
    std::sort(out.begin(), out.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
  }
  return out;
}

std::string FactoredInteger::str() const {
  std::string out;
  for (const auto& f : factors_) {
    if (!out.empty()) out += " * ";
    out += f.prime.get_str();
    if (f.exponent > 1) out += "^" + std::to_string(f.exponent);
  }
  if (status_ != CofactorStatus::unit) {
    if (!out.empty()) out += " * ";
    out += (status_ == CofactorStatus::probable_prime ? "[prp] " : "[composite] ") +
           cofactor_.get_str();
  }
  return out.empty() ? "1" : out;
}

unsigned valuation(const BigInt& n, const BigInt& p) {
  if (n == 0) throw InvalidArgument("valuation of zero is unbounded");
  if (p < 2) throw InvalidArgument("valuation base must be at least 2");
  BigInt rest;
  return static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

BigInt brent_rho(const BigInt& n, std::uint64_t c, std::uint64_t iterations) {
  if (mpz_even_p(n.get_mpz_t())) return BigInt(2);
  const BigInt cc = from_u64(c);
  auto step = [&](BigInt& x) {
    x = x * x + cc;
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
  };

  constexpr std::uint64_t kBatch = 128;
  BigInt y = 2, x, ys, q = 1, g = 1, diff;
  std::uint64_t r = 1, used = 0;
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) step(y);
    used += r;
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const std::uint64_t lim = std::min(kBatch, r - k);
      for (std::uint64_t i = 0; i < lim; ++i) {
        step(y);
        diff = x - y;
        q *= diff;
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      g = gcd(q, n);
      k += lim;
      used += lim;
    }
    if (used > iterations && g == 1) return BigInt(0);
    r *= 2;
  }
  if (g == n) {
    // The batch overshot; replay one step at a time.
    do {
      step(ys);
      diff = x - ys;
      g = gcd(diff, n);
    } while (g == 1);
  }
  if (g == n || g == 1) return BigInt(0);
  return g;
}

BigInt pollard_pm1(const BigInt& n, std::uint64_t bound) {
  if (bound < 2) return BigInt(0);
  const auto& table = small_prime_table();
  std::vector<std::uint64_t> generated;
  const std::vector<std::uint64_t>* primes = &table;
  if (bound > kSmallPrimeTableBound) {
    generated = primes_upto(bound);
    primes = &generated;
  }

  auto prime_power = [bound](std::uint64_t p) {
    std::uint64_t pk = p;
    while (pk <= bound / p) pk *= p;
    return pk;
  };

  BigInt a = 2, saved = 2, g, am1;
  std::size_t checkpoint = 0;
  constexpr std::size_t kChunk = 64;
  std::size_t i = 0;
  for (; i < primes->size() && (*primes)[i] <= bound; ++i) {
    mpz_powm_ui(a.get_mpz_t(), a.get_mpz_t(), prime_power((*primes)[i]), n.get_mpz_t());
    if ((i + 1) % kChunk == 0) {
      am1 = a - 1;
      g = gcd(am1, n);
      if (g == n) break;
      if (g != 1) return g;
      saved = a;
      checkpoint = i + 1;
    }
  }
  am1 = a - 1;
  g = gcd(am1, n);
  if (g != 1 && g != n) return g;
  if (g != n) return BigInt(0);

  // Every prime factor appeared inside the last chunk; redo it one prime at a time.
  a = saved;
  for (std::size_t j = checkpoint; j <= i && j < primes->size(); ++j) {
    mpz_powm_ui(a.get_mpz_t(), a.get_mpz_t(), prime_power((*primes)[j]), n.get_mpz_t());
    am1 = a - 1;
    g = gcd(am1, n);
    if (g == n) return BigInt(0);
    if (g != 1) return g;
  }
  return BigInt(0);
}

namespace {

/// Splits composite n, or returns 0.
BigInt split(const BigInt& n, const FactoringBudget& budget) {
  if (budget.pm1_bound > 0) {
    BigInt g = pollard_pm1(n, budget.pm1_bound);
    if (g != 0) return g;
  }
  std::uint64_t c = 1;
  for (std::uint64_t cap : {1'000'000ull, 10'000'000ull, 100'000'000ull}) {
    const std::uint64_t this_cap = std::min(cap, budget.rho_iteration_cap);
    BigInt g = brent_rho(n, c++, this_cap);
    if (g != 0) return g;
    if (this_cap == budget.rho_iteration_cap) break;
  }
  return BigInt(0);
}

} // namespace

FactoredInteger factor(const BigInt& n, const FactoringBudget& budget) {
  if (n < 1) throw InvalidArgument("factor: argument must be positive");

  std::map<BigInt, unsigned> found;
  BigInt rest = n;

  const auto& table = small_prime_table();
  std::vector<std::uint64_t> generated;
  const std::vector<std::uint64_t>* primes = &table;
  if (budget.trial_bound > kSmallPrimeTableBound) {
    generated = primes_upto(budget.trial_bound);
    primes = &generated;
  }
  bool rest_is_prime = false;
  for (std::uint64_t p : *primes) {
    if (p > budget.trial_bound) break;
    if (fits_u64(rest) && p > to_u64(rest) / p) {
      rest_is_prime = true;  // no factor <= sqrt(rest)
      break;
    }
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      unsigned e = 0;
      while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        ++e;
      }
      found[from_u64(p)] += e;
    }
  }

  std::vector<BigInt> unfactored;
  if (rest > 1) {
    const BigInt bound_sq = from_u64(budget.trial_bound) * from_u64(budget.trial_bound);
    if (rest_is_prime || rest < bound_sq) {
      found[rest] += 1;
    } else {
      std::vector<BigInt> work{rest};
      while (!work.empty()) {
        BigInt m = std::move(work.back());
        work.pop_back();
        if (m == 1) continue;
        if (is_prime(m).is_prime()) {
          found[m] += 1;
          continue;
        }
        if (mpz_perfect_power_p(m.get_mpz_t())) {
          for (unsigned long k = mpz_sizeinbase(m.get_mpz_t(), 2); k >= 2; --k) {
            BigInt root;
            if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), k)) {
              for (unsigned long j = 0; j < k; ++j) work.push_back(root);
              break;
            }
          }
          continue;
        }
        BigInt g = split(m, budget);
        if (g == 0) {
          unfactored.push_back(m);
        } else {
          work.push_back(g);
          work.push_back(BigInt(m / g));
        }
      }
    }
  }

  std::vector<PrimePower> listed;
  for (auto& [p, e] : found) listed.push_back({p, e});

  if (!unfactored.empty()) {
    BigInt cof = 1;
    for (auto& u : unfactored) cof *= u;
    return FactoredInteger(std::move(listed), cof, CofactorStatus::composite_unfactored);
  }
  // A single large prime that only passed the probabilistic test is carried
  // as the cofactor.
  if (!listed.empty() && !fits_u64(listed.back().prime) && listed.back().exponent == 1) {
    BigInt cof = listed.back().prime;
    listed.pop_back();
    return FactoredInteger(std::move(listed), cof, CofactorStatus::probable_prime);
  }
  return FactoredInteger(std::move(listed), BigInt(1), CofactorStatus::unit);
}

} // namespace mft

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mftuple/bigint.hpp"

namespace mft {

enum class CofactorStatus { unit, probable_prime, composite_unfactored };

std::string to_string(CofactorStatus s);

struct PrimePower {
  BigInt prime;
  unsigned exponent = 1;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A positive integer carried as its prime-power decomposition. The cofactor
/// is 1 for a complete factorization, a single probable prime (exponent 1,
/// coprime to the listed primes), or a composite that could not be split.
class FactoredInteger {
public:
  FactoredInteger() = default;

  /// Validates and normalizes: merges equal primes, sorts ascending, checks
  /// every listed prime (and a probable_prime cofactor) with is_prime.
  FactoredInteger(std::vector<PrimePower> factors, BigInt cofactor, CofactorStatus status);

  static FactoredInteger one() { return {}; }

  /// value = cofactor * prod prime^exponent.
  const BigInt& value() const { return value_; }
  const std::vector<PrimePower>& factors() const { return factors_; }
  const BigInt& cofactor() const { return cofactor_; }
  CofactorStatus cofactor_status() const { return status_; }

  bool fully_factored() const { return status_ != CofactorStatus::composite_unfactored; }
  bool squarefree() const;

  /// Factors including a probable-prime cofactor as exponent 1; throws when
  /// the cofactor is an unfactored composite.
  std::vector<PrimePower> all_prime_powers() const;

  /// "2^2 * 3 * [prp] 1000003" style rendering.
  std::string str() const;

private:
  std::vector<PrimePower> factors_;
  BigInt cofactor_ = 1;
  CofactorStatus status_ = CofactorStatus::unit;
  BigInt value_ = 1;
};

struct FactoringBudget {
  std::uint64_t trial_bound = 1'000'000;
  std::uint64_t rho_iteration_cap = 100'000'000;
  /// Stage-one bound for Pollard p-1; 0 disables it.
  std::uint64_t pm1_bound = 100'000;
};

/// Largest y with p^y | n. n >= 1, p >= 2.
unsigned valuation(const BigInt& n, const BigInt& p);

/// Trial division to budget.trial_bound, then Pollard p-1 and Brent's rho
/// (escalating caps 10^6, 10^7, 10^8 clipped to rho_iteration_cap) on the
/// remaining composite parts. Failure is reported through the cofactor.
FactoredInteger factor(const BigInt& n, const FactoringBudget& budget = {});

/// One nontrivial factor of composite n via Brent's rho with polynomial
/// x^2 + c, or 0 when `iterations` runs out.
BigInt brent_rho(const BigInt& n, std::uint64_t c, std::uint64_t iterations);

/// Pollard p-1 stage one with smoothness bound B1; 0 when no factor found.
BigInt pollard_pm1(const BigInt& n, std::uint64_t bound);

} // namespace mft

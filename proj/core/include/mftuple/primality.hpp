#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mftuple/bigint.hpp"

namespace mft {

enum class Verdict { proven_prime, probable_prime, composite };
enum class PrimalityMethod { trial_division, deterministic_small, strong_probable_prime_plus_lucas };

struct PrimalityResult {
  Verdict verdict = Verdict::composite;
  PrimalityMethod method = PrimalityMethod::trial_division;
  std::string witness_info;

  bool is_prime() const { return verdict != Verdict::composite; }
};

struct PrimalityOptions {
  /// Extra Miller-Rabin rounds with pseudo-random bases above 2^64.
  unsigned extra_rounds = 0;
  /// Seed for the extra rounds. Unset means a fixed seed, so verdicts are
  /// reproducible run to run.
  std::optional<std::uint64_t> seed;
};

std::string to_string(Verdict v);
std::string to_string(PrimalityMethod m);

/// Below 2^64 the verdict is exact (trial division under 2^20, then a
/// deterministic Miller-Rabin base set). Above, a base-2 strong probable
/// prime test followed by a strong Lucas test (Selfridge parameters).
PrimalityResult is_prime(const BigInt& n, const PrimalityOptions& options = {});

/// Exact primality for 64-bit values.
bool is_prime_u64(std::uint64_t n);

/// Individual tests, exposed for cross-checking. `n` odd and > 3.
bool strong_probable_prime(const BigInt& n, const BigInt& base);
bool strong_lucas_probable_prime(const BigInt& n);

/// Smallest prime strictly greater than n.
BigInt next_prime(const BigInt& n);

} // namespace mft

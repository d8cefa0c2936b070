#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace mft {

/// All primes p <= bound in ascending order (empty when bound < 2).
std::vector<std::uint64_t> primes_upto(std::uint64_t bound);

/// pi(x), the number of primes <= x.
std::uint64_t prime_count(std::uint64_t x);

inline constexpr std::uint64_t kSmallPrimeTableBound = 1'000'000;

/// Process-wide table of primes up to kSmallPrimeTableBound, built once.
const std::vector<std::uint64_t>& small_prime_table();

/// Ascending stream of primes in [lower, cap], optionally skipping a finite
/// set. Backed by a segmented Eratosthenes sieve, so it can walk well past
/// what a single sieve array would hold.
class PrimeStream {
public:
  static constexpr std::uint64_t kDefaultCap = 10'000'000'000'000'000ull;  // 10^16

  explicit PrimeStream(std::uint64_t lower = 2, std::uint64_t cap = kDefaultCap,
                       std::set<std::uint64_t> excluded = {});

  /// Next prime, or nullopt once the cap is passed.
  std::optional<std::uint64_t> next();

  std::uint64_t cap() const { return cap_; }

private:
  void refill();

  std::uint64_t cap_;
  std::set<std::uint64_t> excluded_;
  std::uint64_t segment_low_;
  std::vector<std::uint64_t> buffer_;
  std::size_t cursor_ = 0;
  std::vector<std::uint64_t> base_primes_;
  std::uint64_t base_limit_ = 0;
  bool exhausted_ = false;
};

} // namespace mft

#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "mftuple/factor.hpp"
#include "mftuple/multiplicative.hpp"
#include "mftuple/rational.hpp"
#include "mftuple/sieve.hpp"

namespace mft {

/// Ascending primes >= lower, skipping `avoid`, up to `cap`.
struct StreamSpec {
  std::uint64_t lower = 2;
  std::set<std::uint64_t> avoid;
  std::uint64_t cap = PrimeStream::kDefaultCap;
};

struct ApproxLimits {
  std::uint64_t stream_cap = PrimeStream::kDefaultCap;
  /// Refuse to build a multiplier w wider than this many bits.
  std::size_t max_w_bits = 65536;
};

/// Outcome of a partial-product run over a prime stream q_1, q_2, ...
struct GreedyResult {
  FactoredInteger w;          ///< q_{start+1} * ... * q_end, squarefree
  std::size_t start_index{};  ///< primes q_1..q_start skipped
  std::size_t end_index{};    ///< least index with the partial product <= C
  PositiveValue achieved;     ///< f(w)
  BigInt last_prime;          ///< q_end
};

/// Least end > start with prod_{start < i <= end} f(q_i) <= C, for C in
/// (0, 1). The result satisfies C * f(q_end) < f(w) <= C. `f` must be in its
/// decreasing orientation (see oriented()). Throws LimitExceeded when the
/// stream ends first, reporting the partial product.
GreedyResult greedy_ratio(const MultiplicativeFunction& f, const StreamSpec& stream,
                          const Rational& C, std::size_t start_index,
                          const ApproxLimits& limits = {});

/// Squarefree w coprime to `avoid` with |f(w) - C| <= tolerance. For f
/// decreasing toward zero the result satisfies C <= f(w) <= C + tolerance:
/// primes are taken in ascending order whenever the product stays >= C, and
/// the run stops once it is within tolerance. The prime sequence does not
/// depend on the tolerance, so a smaller tolerance never gives a larger error.
/// Functions diverging to infinity go through 1/f (C must exceed 1; then
/// C - tolerance <= f(w) <= C). In the result, start_index is 0 and end_index
/// counts the primes of w.
GreedyResult approx_value(const MultiplicativeFunction& f, const Rational& C,
                          const std::set<std::uint64_t>& avoid, const Rational& tolerance,
                          const ApproxLimits& limits = {});

/// Pairwise coprime squarefree w_1..w_d, each coprime to `avoid`, with
/// |f(w_i) - C_i| <= tolerance_i. Each later w avoids the primes of the
/// earlier ones.
std::vector<GreedyResult> approx_tuple(const MultiplicativeFunction& f,
                                       const std::vector<Rational>& targets,
                                       const std::set<std::uint64_t>& avoid,
                                       const std::vector<Rational>& tolerances,
                                       const ApproxLimits& limits = {});

std::vector<GreedyResult> approx_tuple(const MultiplicativeFunction& f,
                                       const std::vector<Rational>& targets,
                                       const std::set<std::uint64_t>& avoid,
                                       const Rational& tolerance,
                                       const ApproxLimits& limits = {});

} // namespace mft

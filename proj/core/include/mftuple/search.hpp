#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mftuple/construct.hpp"
#include "mftuple/primality.hpp"

namespace mft {

struct SearchConfig {
  std::uint64_t sieve_bound = 100'000;
  std::uint64_t segment_length = std::uint64_t{1} << 20;
  BigInt t_start = 0;
  std::uint64_t max_segments = 1'000;
  unsigned worker_count = 1;
  /// Wall-clock budget in seconds; 0 means none.
  double time_limit = 0;
  PrimalityOptions primality;
};

/// Forbidden t residues modulo one sieving prime.
struct SieveResidues {
  std::uint64_t prime = 0;
  std::vector<std::uint64_t> forbidden;
};

/// For each prime p <= sieve_bound, the residues t mod p at which some
/// polynomial of the plan is divisible by p. Primes with no forbidden residue
/// are omitted. Throws Error("plan admits no candidates") when every residue
/// is forbidden or a polynomial is divisible by p for every t.
std::vector<SieveResidues> sieve_residues(const std::vector<LinearPolynomial>& polys,
                                          std::uint64_t sieve_bound);
std::vector<SieveResidues> sieve_residues(const ConstructionPlan& plan, std::uint64_t sieve_bound);

/// The h_1..h_m then g_1..g_d of a plan.
std::vector<LinearPolynomial> plan_polynomials(const ConstructionPlan& plan);

/// Offsets k in [0, length) such that t_start + k avoids every forbidden
/// residue.
std::vector<std::uint64_t> sieve_segment(const std::vector<SieveResidues>& residues,
                                         const BigInt& t_start, std::uint64_t length);

struct SearchHit {
  BigInt t;
  BigInt n;
  std::vector<PrimalityResult> primality;  ///< h_1..h_m, g_1..g_d
  std::vector<FactoredInteger> shifted;    ///< n + alpha_i
  std::vector<PositiveValue> values;       ///< f(n + alpha_i)
  std::vector<double> errors;              ///< relative error vs each goal target
  std::optional<std::vector<PositiveValue>> ratios;
};

struct SearchStats {
  std::uint64_t segments = 0;
  std::uint64_t candidates = 0;
  std::uint64_t survivors = 0;
  std::uint64_t primality_tests = 0;
  std::uint64_t full_passes = 0;
  std::uint64_t near_misses = 0;
  double seconds = 0;
};

struct NearMiss {
  BigInt t;
  std::vector<double> errors;
};

struct SearchOutcome {
  std::optional<SearchHit> hit;
  SearchStats stats;
  std::vector<NearMiss> near_misses;  ///< first few, in t order within a segment
  std::string reason;                 ///< why the search stopped without a hit
};

/// Evaluates a t whose polynomials are all prime: checks g_i(t) > max(w_i, p_L)
/// and the goal window exactly. nullopt when it misses; `errors` receives the
/// achieved relative errors either way.
std::optional<SearchHit> accept_candidate(const ConstructionPlan& plan, const BigInt& t,
                                          std::vector<PrimalityResult> verdicts,
                                          std::vector<double>* errors = nullptr);

/// Lowest t >= t_start (in deterministic order, independent of worker count)
/// whose polynomials are all prime and whose values meet the goal.
SearchOutcome find_hit(const ConstructionPlan& plan, const SearchConfig& config);

/// Plain-text report with `digits` decimal places, rounded, plus matched
/// digits against each target.
std::string hit_report(const ConstructionPlan& plan, const SearchHit& hit, unsigned digits);

} // namespace mft

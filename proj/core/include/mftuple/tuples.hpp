#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace mft {

using Offsets = std::vector<std::int64_t>;

struct AdmissibilityCertificate {
  bool admissible = false;
  /// Prime whose residue classes the tuple covers completely (when inadmissible).
  std::optional<std::uint64_t> obstruction;
  /// For each prime p <= m, one residue class the tuple misses (when admissible).
  std::vector<std::pair<std::uint64_t, std::uint64_t>> missing_residues;
};

/// True iff no prime p has every class mod p hit by the betas. Only p <= m
/// can be covered. Throws InvalidArgument on empty input or duplicates.
AdmissibilityCertificate is_admissible(const Offsets& betas);

/// Smallest b in [0, p) with prod (b + beta_i) != 0 mod p. Throws
/// InvalidArgument("inadmissible at p") when every class is hit.
std::uint64_t find_nonvanishing_residue(const Offsets& betas, std::uint64_t p);

/// Shift offsets alpha_1..alpha_d and primality constraints beta_1..beta_m.
class TupleSpec {
public:
  /// Validates distinctness, alpha_i != beta_j, and computes admissibility.
  TupleSpec(Offsets alphas, Offsets betas);

  const Offsets& alphas() const { return alphas_; }
  const Offsets& betas() const { return betas_; }
  std::size_t d() const { return alphas_.size(); }
  std::size_t m() const { return betas_.size(); }
  bool admissible() const { return certificate_.admissible; }
  const AdmissibilityCertificate& certificate() const { return certificate_; }

private:
  Offsets alphas_;
  Offsets betas_;
  AdmissibilityCertificate certificate_;
};

/// Nonnegative residue of v modulo m.
inline std::uint64_t residue(std::int64_t v, std::uint64_t m) {
  const auto mm = static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(((v % mm) + mm) % mm);
}

} // namespace mft

#pragma once

#include <vector>

#include "mftuple/bigint.hpp"

namespace mft {

struct Congruence {
  BigInt residue;
  BigInt modulus;  // > 0
};

struct CrtSolution {
  BigInt solution;  // in [0, modulus)
  BigInt modulus;   // product of the input moduli
};

/// Combines pairwise coprime congruences. Throws InvalidArgument naming the
/// first offending pair when two moduli share a factor.
CrtSolution crt(const std::vector<Congruence>& congruences);

} // namespace mft

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mftuple/factor.hpp"
#include "mftuple/positive_value.hpp"

namespace mft {

enum class Divergence { to_zero, to_infinity };

std::string to_string(Divergence d);

/// A positive multiplicative function given by its values on prime powers.
/// `divergence` records whether prod f(p) over the witness set tends to 0 or
/// to infinity; it is declared, never inferred.
struct MultiplicativeFunction {
  using Rule = std::function<PositiveValue(const BigInt& prime, unsigned exponent)>;

  std::string name;
  Rule rule;
  Divergence divergence = Divergence::to_zero;
  std::string witness_set = "all primes";
  bool limit_at_primes_is_one = true;
  /// rule(p, 1) is monotone in p and the same formula extends to all integers,
  /// so the least prime with a given value bound can be found by bisection.
  bool monotone_at_primes = false;
  /// True for the reciprocal of a declared function.
  bool reciprocal = false;

  PositiveValue at(const BigInt& prime, unsigned exponent) const { return rule(prime, exponent); }
};

/// f together with the scaling h(n) = n^h_power, giving g = f * h.
struct ScaledFunction {
  MultiplicativeFunction f;
  unsigned h_power = 0;
};

/// Names accepted by builtin().
const std::vector<std::string>& builtin_names();

/// phi_over_n, sigma_over_n, n_over_sigma, exp_valuation. Throws
/// InvalidArgument listing the available names.
MultiplicativeFunction builtin(const std::string& name);

/// Resolves a command-line function name. Accepts the builtin names plus
/// "phi" (phi_over_n with h_power 1) and "sigma" (sigma_over_n with
/// h_power 1). An explicit h_power overrides the alias default.
ScaledFunction resolve_function(const std::string& name, std::optional<unsigned> h_power = {});

/// 1/f, with divergence flipped.
MultiplicativeFunction reciprocal(const MultiplicativeFunction& f);

/// f when it diverges to zero, otherwise 1/f: the orientation the density
/// construction works in.
MultiplicativeFunction oriented(const MultiplicativeFunction& f);

/// Product of rule(p, k) over the decomposition. A probable-prime cofactor
/// counts as a prime with exponent 1; an unfactored composite cofactor throws.
PositiveValue eval_factored(const MultiplicativeFunction& f, const FactoredInteger& n);

/// Product over an explicit prime-power list.
PositiveValue eval_prime_powers(const MultiplicativeFunction& f,
                                const std::vector<PrimePower>& factors);

} // namespace mft

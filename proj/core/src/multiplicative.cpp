#include "mftuple/multiplicative.hpp"

#include <optional>

#include "mftuple/error.hpp"

namespace mft {

std::string to_string(Divergence d) { return d == Divergence::to_zero ? "to_zero" : "to_infinity"; }

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"phi_over_n", "sigma_over_n", "n_over_sigma",
                                                 "exp_valuation"};
  return names;
}

namespace {

/// sigma(p^k) / p^k = (p^{k+1} - 1) / (p^k (p - 1))
Rational sigma_ratio(const BigInt& p, unsigned k) {
  BigInt pk, pk1;
  mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), k);
  pk1 = pk * p;
  return Rational(BigInt(pk1 - 1), BigInt(pk * (p - 1)));
}

} // namespace

MultiplicativeFunction builtin(const std::string& name) {
  MultiplicativeFunction f;
  f.name = name;
  f.monotone_at_primes = true;
  if (name == "phi_over_n") {
    f.rule = [](const BigInt& p, unsigned) { return PositiveValue(Rational(BigInt(p - 1), p)); };
    f.divergence = Divergence::to_zero;
  } else if (name == "sigma_over_n") {
    f.rule = [](const BigInt& p, unsigned k) { return PositiveValue(sigma_ratio(p, k)); };
    f.divergence = Divergence::to_infinity;
  } else if (name == "n_over_sigma") {
    f.rule = [](const BigInt& p, unsigned k) {
      return PositiveValue(sigma_ratio(p, k).reciprocal());
    };
    f.divergence = Divergence::to_zero;
  } else if (name == "exp_valuation") {
    f.rule = [](const BigInt& p, unsigned k) {
      return PositiveValue::exp(Rational(BigInt(k), p));
    };
    f.divergence = Divergence::to_infinity;
  } else {
    std::string list;
    for (const auto& n : builtin_names()) list += (list.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown function '" + name + "'; available: " + list);
  }
  return f;
}

ScaledFunction resolve_function(const std::string& name, std::optional<unsigned> h_power) {
  if (name == "phi") return {builtin("phi_over_n"), h_power.value_or(1)};
  if (name == "sigma") return {builtin("sigma_over_n"), h_power.value_or(1)};
  return {builtin(name), h_power.value_or(0)};
}

MultiplicativeFunction reciprocal(const MultiplicativeFunction& f) {
  MultiplicativeFunction g = f;
  g.rule = [rule = f.rule](const BigInt& p, unsigned k) { return rule(p, k).reciprocal(); };
  g.divergence = f.divergence == Divergence::to_zero ? Divergence::to_infinity : Divergence::to_zero;
  g.reciprocal = !f.reciprocal;
  return g;
}

MultiplicativeFunction oriented(const MultiplicativeFunction& f) {
  return f.divergence == Divergence::to_zero ? f : reciprocal(f);
}

PositiveValue eval_prime_powers(const MultiplicativeFunction& f,
                                const std::vector<PrimePower>& factors) {
  PositiveValue out;
  for (const auto& pp : factors) out *= f.at(pp.prime, pp.exponent);
  return out;
}

PositiveValue eval_factored(const MultiplicativeFunction& f, const FactoredInteger& n) {
  return eval_prime_powers(f, n.all_prime_powers());
}

} // namespace mft

#include "mftuple/crt.hpp"

#include <string>

#include "mftuple/error.hpp"

namespace mft {

CrtSolution crt(const std::vector<Congruence>& congruences) {
  for (std::size_t i = 0; i < congruences.size(); ++i) {
    if (congruences[i].modulus <= 0)
      throw InvalidArgument("crt: modulus #" + std::to_string(i) + " is not positive");
    for (std::size_t j = i + 1; j < congruences.size(); ++j) {
      BigInt g = gcd(congruences[i].modulus, congruences[j].modulus);
      if (g != 1)
        throw InvalidArgument("crt: moduli #" + std::to_string(i) + " (" +
                              congruences[i].modulus.get_str() + ") and #" + std::to_string(j) +
                              " (" + congruences[j].modulus.get_str() + ") share factor " +
                              g.get_str());
    }
  }

  CrtSolution out{BigInt(0), BigInt(1)};
  BigInt inv, r, step;
  for (const auto& c : congruences) {
    // out.solution + out.modulus * k == c.residue (mod c.modulus)
    mpz_invert(inv.get_mpz_t(), out.modulus.get_mpz_t(), c.modulus.get_mpz_t());
    r = c.residue - out.solution;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), c.modulus.get_mpz_t());
    step = r * inv;
    mpz_mod(step.get_mpz_t(), step.get_mpz_t(), c.modulus.get_mpz_t());
    out.solution += out.modulus * step;
    out.modulus *= c.modulus;
  }
  if (congruences.empty()) out.solution = 0;

  for (const auto& c : congruences) {
    BigInt diff = out.solution - c.residue;
    if (!mpz_divisible_p(diff.get_mpz_t(), c.modulus.get_mpz_t()))
      throw Error("crt: internal self-check failed");
  }
  return out;
}

} // namespace mft

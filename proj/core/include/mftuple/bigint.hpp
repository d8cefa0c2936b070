#pragma once

#include <climits>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace mft {

static_assert(sizeof(unsigned long) == sizeof(std::uint64_t),
              "GMP word helpers assume an LP64 platform");

using BigInt = mpz_class;

/// Parses a base-10 integer with optional sign. Throws InvalidArgument.
BigInt parse_bigint(std::string_view text);

inline std::string to_decimal(const BigInt& n) { return n.get_str(10); }

inline bool fits_u64(const BigInt& n) {
  return sgn(n) >= 0 && mpz_fits_ulong_p(n.get_mpz_t());
}

inline std::uint64_t to_u64(const BigInt& n) { return mpz_get_ui(n.get_mpz_t()); }

inline BigInt from_u64(std::uint64_t v) {
  BigInt r;
  mpz_set_ui(r.get_mpz_t(), v);
  return r;
}

/// Nonnegative residue of n modulo m (m > 0).
inline std::uint64_t mod_u64(const BigInt& n, std::uint64_t m) {
  return mpz_fdiv_ui(n.get_mpz_t(), m);
}

inline std::size_t bit_length(const BigInt& n) {
  return sgn(n) == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2);
}

} // namespace mft

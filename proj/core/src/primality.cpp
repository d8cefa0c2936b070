#include "mftuple/primality.hpp"

#include <array>
#include <random>

#include "mftuple/error.hpp"

namespace mft {

namespace {

using u64 = std::uint64_t;
__extension__ using u128 = unsigned __int128;

constexpr std::array<unsigned, 25> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                                   43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 e, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return result;
}

bool sprp_u64(u64 n, u64 a) {
  a %= n;
  if (a == 0) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool trial_division_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
    if (n % p == 0) return false;
  return true;
}

constexpr u64 kTrialDivisionLimit = u64{1} << 20;

} // namespace

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::proven_prime: return "proven_prime";
  case Verdict::probable_prime: return "probable_prime";
  case Verdict::composite: return "composite";
  }
  return "?";
}

std::string to_string(PrimalityMethod m) {
  switch (m) {
  case PrimalityMethod::trial_division: return "trial_division";
  case PrimalityMethod::deterministic_small: return "deterministic_small";
  case PrimalityMethod::strong_probable_prime_plus_lucas: return "strong_probable_prime_plus_lucas";
  }
  return "?";
}

bool is_prime_u64(u64 n) {
  if (n < kTrialDivisionLimit) return trial_division_u64(n);
  for (unsigned p : kSmallPrimes)
    if (n % p == 0) return false;
  // Sinclair's base set is exact for all n < 2^64.
  for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull})
    if (!sprp_u64(n, a)) return false;
  return true;
}

bool strong_probable_prime(const BigInt& n, const BigInt& base) {
  const BigInt n_minus_1 = n - 1;
  BigInt d = n_minus_1;
  const mp_bitcnt_t s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  BigInt x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (mp_bitcnt_t r = 1; r < s; ++r) {
    mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

bool strong_lucas_probable_prime(const BigInt& n) {
  if (mpz_perfect_square_p(n.get_mpz_t())) return false;

  // Selfridge method A: first D in 5, -7, 9, -11, ... with (D/n) = -1.
  long D = 5;
  for (;;) {
    BigInt d_big(D);
    const int j = mpz_jacobi(d_big.get_mpz_t(), n.get_mpz_t());
    if (j == -1) break;
    if (j == 0) {
      BigInt g = abs(d_big);
      if (g != n) return false;
    }
    D = D > 0 ? -(D + 2) : -(D - 2);
  }
  const BigInt P = 1;
  const BigInt Q = BigInt((1 - D) / 4);
  const BigInt Dn = BigInt(D);

  BigInt d = n + 1;
  const mp_bitcnt_t s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  auto reduce = [&n](BigInt& x) { mpz_mod(x.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t()); };
  auto halve = [&n](BigInt& x) {
    if (mpz_odd_p(x.get_mpz_t())) x += n;
    mpz_tdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), 1);
  };

  // Left-to-right binary ladder on (U_k, V_k, Q^k) starting at k = 1.
  BigInt U = 1, V = P, Qk = Q;
  reduce(Qk);
  const std::size_t bits = mpz_sizeinbase(d.get_mpz_t(), 2);
  BigInt t1, t2;
  for (std::size_t i = bits - 1; i-- > 0;) {
    U = U * V;
    reduce(U);
    V = V * V - 2 * Qk;
    reduce(V);
    Qk = Qk * Qk;
    reduce(Qk);
    if (mpz_tstbit(d.get_mpz_t(), i)) {
      t1 = P * U + V;
      t2 = Dn * U + P * V;
      reduce(t1);
      reduce(t2);
      halve(t1);
      halve(t2);
      U = t1;
      V = t2;
      Qk = Qk * Q;
      reduce(Qk);
    }
  }
  if (U == 0 || V == 0) return true;
  for (mp_bitcnt_t r = 1; r < s; ++r) {
    V = V * V - 2 * Qk;
    reduce(V);
    if (V == 0) return true;
    Qk = Qk * Qk;
    reduce(Qk);
  }
  return false;
}

PrimalityResult is_prime(const BigInt& n, const PrimalityOptions& options) {
  PrimalityResult out;
  if (n < 2) {
    out.verdict = Verdict::composite;
    out.method = PrimalityMethod::trial_division;
    out.witness_info = "values below 2 are not prime";
    return out;
  }
  if (fits_u64(n)) {
    const u64 v = to_u64(n);
    out.method = v < kTrialDivisionLimit ? PrimalityMethod::trial_division
                                         : PrimalityMethod::deterministic_small;
    out.verdict = is_prime_u64(v) ? Verdict::proven_prime : Verdict::composite;
    return out;
  }

  out.method = PrimalityMethod::strong_probable_prime_plus_lucas;
  for (unsigned p : kSmallPrimes) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out.verdict = Verdict::composite;
      out.witness_info = "divisible by " + std::to_string(p);
      return out;
    }
  }
  if (!strong_probable_prime(n, BigInt(2))) {
    out.verdict = Verdict::composite;
    out.witness_info = "base-2 strong probable prime test failed";
    return out;
  }
  if (!strong_lucas_probable_prime(n)) {
    out.verdict = Verdict::composite;
    out.witness_info = "strong Lucas test failed";
    return out;
  }
  if (options.extra_rounds > 0) {
    std::mt19937_64 rng(options.seed.value_or(0x6d667475706c65ull));
    gmp_randclass gen(gmp_randinit_default);
    gen.seed(static_cast<unsigned long>(rng()));
    const BigInt span = n - 3;
    for (unsigned i = 0; i < options.extra_rounds; ++i) {
      BigInt base = gen.get_z_range(span) + 2;
      if (!strong_probable_prime(n, base)) {
        out.verdict = Verdict::composite;
        out.witness_info = "Miller-Rabin witness " + base.get_str();
        return out;
      }
    }
  }
  out.verdict = Verdict::probable_prime;
  return out;
}

BigInt next_prime(const BigInt& n) {
  if (n < 2) return BigInt(2);
  BigInt c = n + 1;
  if (mpz_even_p(c.get_mpz_t()) && c != 2) c += 1;
  while (!is_prime(c).is_prime()) c += 2;
  return c;
}

} // namespace mft

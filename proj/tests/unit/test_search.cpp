#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "mftuple/construct.hpp"
#include "mftuple/error.hpp"
#include "mftuple/factor.hpp"
#include "mftuple/search.hpp"
#include "mftuple/sieve.hpp"
#include "oracles.hpp"

using namespace mft;

namespace {

Rational q(long n, long d) { return {BigInt(n), BigInt(d)}; }

ConstructionPlan worked_plan() {
  return build_plan(builtin("phi_over_n"), TupleSpec({1}, {0, 2}), {q(1, 4)}, q(1, 10));
}

ConstructionPlan sigma_plan() {
  Goal goal;
  goal.targets = {q(5, 2)};
  goal.epsilon = q(1, 20);
  return plan_for_goal("sigma_over_n", TupleSpec({1}, {0, 2}), goal);
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  for (std::uint64_t x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  return 0;
}

} // namespace

TEST(Search, ResidueExamples) {
  const auto plan = worked_plan();
  const auto res = sieve_residues(plan, 7);
  const SieveResidues* p2 = nullptr;
  const SieveResidues* p7 = nullptr;
  for (const auto& r : res) {
    if (r.prime == 2) p2 = &r;
    if (r.prime == 7) p7 = &r;
  }
  EXPECT_EQ(p2, nullptr);
  ASSERT_NE(p7, nullptr);
  std::set<std::uint64_t> expect;
  for (auto [a, b] : {std::pair{900u, 29u}, {900u, 31u}, {30u, 1u}})
    expect.insert((7 - (b % 7) * inv_mod(a % 7, 7) % 7) % 7);
  EXPECT_EQ(expect.size(), 3u);
  EXPECT_EQ(std::set<std::uint64_t>(p7->forbidden.begin(), p7->forbidden.end()), expect);

  const auto single = sieve_residues({LinearPolynomial{1, 1}}, 3);
  ASSERT_EQ(single.size(), 2u);
  EXPECT_EQ(single[1].prime, 3u);
  EXPECT_EQ(single[1].forbidden, (std::vector<std::uint64_t>{2}));

  EXPECT_THROW(sieve_residues({LinearPolynomial{2, 4}}, 10), Error);
  EXPECT_THROW(sieve_residues({LinearPolynomial{1, 0}, LinearPolynomial{1, 1}}, 10), Error);
}

TEST(Search, SegmentMatchesBruteForce) {
  const auto plan = worked_plan();
  const std::uint64_t bound = 1000;
  const auto residues = sieve_residues(plan, bound);
  const std::uint64_t len = std::uint64_t{1} << 20;
  const std::uint64_t start = 12345;
  const auto survivors = sieve_segment(residues, BigInt(static_cast<unsigned long>(start)), len);
  const auto primes = primes_upto(bound);
  std::vector<std::uint64_t> brute;
  for (std::uint64_t k = 0; k < len; ++k) {
    const std::uint64_t t = start + k;
    const std::uint64_t vals[] = {900 * t + 29, 900 * t + 31, 30 * t + 1};
    bool ok = true;
    for (auto v : vals) {
      for (auto p : primes)
        if (v % p == 0) {
          ok = false;
          break;
        }
      if (!ok) break;
    }
    if (ok) brute.push_back(k);
  }
  EXPECT_EQ(survivors, brute);
}

TEST(Search, SurvivorsHaveNoSmallFactors) {
  for (const auto& plan : {worked_plan(), sigma_plan()}) {
    const std::uint64_t bound = 100'000;
    const auto residues = sieve_residues(plan, bound);
    const BigInt start = 1'000'000;
    const auto survivors = sieve_segment(residues, start, 1 << 19);
    ASSERT_GT(survivors.size(), 1000u);
    const auto primes = primes_upto(bound);
    const auto polys = plan_polynomials(plan);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
      const BigInt t = start + static_cast<unsigned long>(survivors[rng() % survivors.size()]);
      for (const auto& poly : polys) {
        const BigInt v = poly(t);
        for (auto p : primes) ASSERT_NE(mpz_divisible_ui_p(v.get_mpz_t(), p), 1) << p;
      }
    }
  }
}

namespace {

// Least t whose worked-plan polynomials are prime (trial division) with
// 30t+1 > 5 and the exact value inside (0.225, 0.275).
std::uint64_t oracle_worked_hit() {
  for (std::uint64_t t = 0; t <= 100'000; ++t) {
    const std::uint64_t g = 30 * t + 1;
    if (!oracle::is_prime(900 * t + 29) || !oracle::is_prime(900 * t + 31) || !oracle::is_prime(g))
      continue;
    if (g <= 5) continue;
    const Rational v = q(4, 15) * Rational(BigInt(static_cast<unsigned long>(g - 1)),
                                           BigInt(static_cast<unsigned long>(g)));
    if (v > q(9, 40) && v < q(11, 40)) return t;
  }
  return 0;
}

} // namespace

TEST(Search, WorkedPlanHitMatchesOracle) {
  const auto plan = worked_plan();
  const auto out = find_hit(plan, SearchConfig{});
  ASSERT_TRUE(out.hit) << out.reason;
  EXPECT_EQ(out.hit->t, oracle_worked_hit());
  EXPECT_EQ(out.hit->n, plan.h0(out.hit->t));
  const Rational achieved(BigInt(static_cast<unsigned long>(oracle::totient(to_u64(out.hit->n) + 1))),
                          out.hit->n + 1);
  EXPECT_EQ(PositiveValue(achieved), out.hit->values[0]);
}

TEST(Search, DeterministicAcrossWorkers) {
  for (const auto& plan : {worked_plan(), sigma_plan()}) {
    SearchConfig one;
    one.segment_length = 8;
    one.max_segments = 100'000;
    SearchConfig four = one;
    four.worker_count = 4;
    const auto a = find_hit(plan, one);
    const auto b = find_hit(plan, four);
    const auto c = find_hit(plan, SearchConfig{});
    ASSERT_TRUE(a.hit && b.hit && c.hit);
    EXPECT_EQ(a.hit->t, b.hit->t);
    EXPECT_EQ(a.hit->t, c.hit->t);
    EXPECT_EQ(a.hit->values, b.hit->values);
  }
}

TEST(Search, AcceptanceAgreesWithIndependentFactorization) {
  for (const auto& plan : {worked_plan(), sigma_plan()}) {
    const auto out = find_hit(plan, SearchConfig{});
    ASSERT_TRUE(out.hit);
    const auto& hit = *out.hit;
    for (std::size_t j = 0; j < plan.h.size(); ++j) {
      EXPECT_EQ(hit.n + plan.spec.betas()[j], plan.h[j](hit.t));
      EXPECT_TRUE(hit.primality[j].is_prime());
    }
    const auto f = plan.function();
    for (std::size_t i = 0; i < plan.g.size(); ++i) {
      const BigInt shifted = hit.n + plan.spec.alphas()[i];
      EXPECT_EQ(plan.g[i](hit.t) * plan.w[i].value() * plan.smooth_part(i), shifted);
      EXPECT_GT(plan.g[i](hit.t), plan.w[i].value());
      const auto independent = eval_factored(f, factor(shifted));
      EXPECT_EQ(independent, hit.values[i]);
      const Rational& xi = plan.goal.targets[i];
      EXPECT_EQ(compare(independent, xi * (Rational(1) - plan.goal.epsilon)),
                std::strong_ordering::greater);
      EXPECT_EQ(compare(independent, xi * (Rational(1) + plan.goal.epsilon)),
                std::strong_ordering::less);
    }
  }
}

TEST(Search, DegenerateSpecAgainstSmallOracle) {
  // n prime, phi(n+1)/(n+1) near 1/3; the least such n is 5.
  std::uint64_t least = 0;
  for (std::uint64_t n = 2; n <= 1'000'000 && !least; ++n) {
    if (!oracle::is_prime(n)) continue;
    const Rational v(BigInt(static_cast<unsigned long>(oracle::totient(n + 1))),
                     BigInt(static_cast<unsigned long>(n + 1)));
    if (v > q(3, 10) && v < q(11, 30)) least = n;
  }
  EXPECT_EQ(least, 5u);

  const auto plan = build_plan(builtin("phi_over_n"), TupleSpec({1}, {0}), {q(1, 3)}, q(1, 10));
  const auto out = find_hit(plan, SearchConfig{});
  ASSERT_TRUE(out.hit);
  const auto n = to_u64(out.hit->n);
  ASSERT_TRUE(oracle::is_prime(n));
  // totient from a trial-division factorization
  std::uint64_t phi = n + 1;
  auto ps = oracle::prime_factors(n + 1);
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  for (auto p : ps) phi = phi / p * (p - 1);
  const Rational v(BigInt(static_cast<unsigned long>(phi)), BigInt(static_cast<unsigned long>(n + 1)));
  EXPECT_EQ(PositiveValue(v), out.hit->values[0]);
  EXPECT_TRUE(v > q(3, 10) && v < q(11, 30));
}

TEST(Search, ExhaustedReport) {
  const auto plan = worked_plan();
  SearchConfig cfg;
  cfg.segment_length = 4;
  cfg.max_segments = 2;
  const auto out = find_hit(plan, cfg);
  EXPECT_FALSE(out.hit);
  EXPECT_FALSE(out.reason.empty());
  EXPECT_EQ(out.stats.segments, 2u);
  EXPECT_EQ(out.stats.candidates, 8u);
}

TEST(Search, HitReport) {
  const auto plan = build_plan(builtin("phi_over_n"), TupleSpec({1}, {0}), {q(1, 3)}, q(1, 10));
  SearchHit hit;
  hit.t = 0;
  hit.n = 5;
  hit.values = {PositiveValue(q(1, 3))};
  const auto text = hit_report(plan, hit, 10);
  EXPECT_NE(text.find("f(n+1) = 0.3333333333"), std::string::npos) << text;
  EXPECT_NE(text.find("matched digits 10"), std::string::npos) << text;

  hit.values = {PositiveValue::exp(q(1, 2))};
  EXPECT_NE(hit_report(plan, hit, 10).find("1.6487212707"), std::string::npos);
}

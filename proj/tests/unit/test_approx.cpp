#include <gtest/gtest.h>

#include <random>
#include <set>

#include "mftuple/approx.hpp"
#include "mftuple/error.hpp"
#include "mftuple/sieve.hpp"

using namespace mft;

namespace {

Rational q(long n, long d) { return {BigInt(n), BigInt(d)}; }

std::vector<std::uint64_t> primes_of(const FactoredInteger& w) {
  std::vector<std::uint64_t> out;
  for (const auto& pp : w.factors()) out.push_back(to_u64(pp.prime));
  return out;
}

Rational abs_error(const PositiveValue& v, const Rational& c) {
  // exact for rational values
  return (v.coefficient() - c).abs();
}

} // namespace

// f(w) in (C f(q_end), C] checked with exact rationals against an
// independently generated prime list.
TEST(Approx, GreedyBracketing) {
  const auto phi = builtin("phi_over_n");
  const auto nos = builtin("n_over_sigma");
  const auto table = primes_upto(2'000'000);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto& f = (i % 2) ? phi : nos;
    const Rational C(BigInt(static_cast<unsigned long>(700 + rng() % 290)), BigInt(1000));
    const std::size_t start = rng() % 50;
    const GreedyResult r = greedy_ratio(f, {}, C, start);
    ASSERT_EQ(r.start_index, start);
    const auto ps = primes_of(r.w);
    ASSERT_EQ(ps.size(), r.end_index - start);
    ASSERT_EQ(ps.front(), table[start]);
    Rational prod(1), before(1);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      ASSERT_EQ(ps[k], table[start + k]);
      before = prod;
      prod *= f.at(BigInt(static_cast<unsigned long>(ps[k])), 1).coefficient();
    }
    ASSERT_EQ(PositiveValue(prod), r.achieved);
    ASSERT_LE(prod, C);
    ASSERT_GT(before, C);  // least end: the previous partial product is still above C
    ASSERT_GT(prod, C * f.at(r.last_prime, 1).coefficient());
  }
}

TEST(Approx, GreedyExamples) {
  const auto phi = builtin("phi_over_n");
  auto a = greedy_ratio(phi, {}, q(1, 2), 0);
  EXPECT_EQ(a.w.value(), 2);
  EXPECT_EQ(a.achieved, PositiveValue(q(1, 2)));
  EXPECT_EQ(a.end_index, 1u);
  StreamSpec from3;
  from3.lower = 3;
  auto b = greedy_ratio(phi, from3, q(7, 10), 0);
  EXPECT_EQ(b.w.value(), 3);
  EXPECT_EQ(b.achieved, PositiveValue(q(2, 3)));
  auto c = greedy_ratio(phi, {}, q(99, 100), 0);
  EXPECT_EQ(c.end_index, 1u);
  auto d = greedy_ratio(phi, {}, q(99, 100), 100);
  Rational prod(1);
  const auto table = primes_upto(100'000);
  for (std::size_t k = 100; k < d.end_index; ++k) {
    ASSERT_GT(prod, q(99, 100));
    prod *= Rational(BigInt(static_cast<unsigned long>(table[k] - 1)), BigInt(static_cast<unsigned long>(table[k])));
  }
  EXPECT_LE(prod, q(99, 100));
}

TEST(Approx, GreedyRejectsThresholdOutsideUnitInterval) {
  EXPECT_THROW(greedy_ratio(builtin("phi_over_n"), {}, Rational(1), 0), InvalidArgument);
  StreamSpec tiny;
  tiny.cap = 100;
  EXPECT_THROW(greedy_ratio(builtin("phi_over_n"), tiny, q(1, 100), 0), LimitExceeded);
}

TEST(Approx, ValueExamples) {
  const auto phi = builtin("phi_over_n");
  auto a = approx_value(phi, q(4, 5), {2, 3}, q(1, 100));
  EXPECT_EQ(a.w.value(), 5);
  EXPECT_EQ(a.achieved, PositiveValue(q(4, 5)));

  auto b = approx_value(phi, q(1, 2), {}, q(1, 1000));
  EXPECT_TRUE(b.w.squarefree());
  EXPECT_LE(abs_error(b.achieved, q(1, 2)), q(1, 1000));

  auto c = approx_value(phi, q(1, 2), {2, 3, 5, 7}, q(1, 1000));
  for (auto p : primes_of(c.w)) EXPECT_GT(p, 7u);
  EXPECT_LE(abs_error(c.achieved, q(1, 2)), q(1, 1000));
  EXPECT_GE(c.achieved.coefficient(), q(1, 2));
}

TEST(Approx, DivergingFunctionGoesThroughReciprocal) {
  const auto sig = builtin("sigma_over_n");
  const auto r = approx_value(sig, q(5, 2), {2, 3}, q(1, 10000));
  EXPECT_LE(abs_error(r.achieved, q(5, 2)), q(1, 10000));
  EXPECT_LE(r.achieved.coefficient(), q(5, 2));
  EXPECT_EQ(r.achieved, eval_factored(sig, r.w));
  EXPECT_THROW(approx_value(sig, q(1, 2), {}, q(1, 10)), InvalidArgument);

  const auto ev = builtin("exp_valuation");
  const auto e = approx_value(ev, q(3, 2), {}, q(1, 100000));
  EXPECT_NE(compare(e.achieved, q(3, 2) - q(1, 100000)), std::strong_ordering::less);
  EXPECT_NE(compare(e.achieved, q(3, 2)), std::strong_ordering::greater);
}

TEST(Approx, TupleExamples) {
  const auto phi = builtin("phi_over_n");
  auto one = approx_tuple(phi, {q(4, 5)}, {2, 3}, q(1, 100));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].w.value(), 5);
  auto two = approx_tuple(phi, {q(4, 5), q(6, 7)}, {2, 3}, q(1, 100));
  EXPECT_EQ(two[0].w.value(), 5);
  EXPECT_EQ(two[1].w.value(), 7);
  auto halves = approx_tuple(phi, {q(1, 2), q(1, 2)}, {}, q(1, 100));
  BigInt g;
  mpz_gcd(g.get_mpz_t(), halves[0].w.value().get_mpz_t(), halves[1].w.value().get_mpz_t());
  EXPECT_EQ(g, 1);
  for (const auto& h : halves) EXPECT_LE(abs_error(h.achieved, q(1, 2)), q(1, 100));
}

TEST(Approx, SquarefreeCoprimeAndAvoiding) {
  const auto phi = builtin("phi_over_n");
  std::mt19937_64 rng(17);
  const auto small = primes_upto(60);
  for (int i = 0; i < 1000; ++i) {
    std::set<std::uint64_t> avoid;
    for (auto p : small)
      if (rng() % 3 == 0) avoid.insert(p);
    const std::size_t d = 1 + rng() % 3;
    std::vector<Rational> targets;
    for (std::size_t k = 0; k < d; ++k)
      targets.emplace_back(BigInt(static_cast<unsigned long>(70 + rng() % 29)), BigInt(100));
    const Rational tol(BigInt(1), BigInt(static_cast<unsigned long>(100 + rng() % 10000)));
    const auto res = approx_tuple(phi, targets, avoid, tol);
    std::set<std::uint64_t> used;
    for (std::size_t k = 0; k < d; ++k) {
      ASSERT_TRUE(res[k].w.squarefree());
      ASSERT_LE(abs_error(res[k].achieved, targets[k]), tol);
      for (auto p : primes_of(res[k].w)) {
        ASSERT_FALSE(avoid.count(p)) << p;
        ASSERT_TRUE(used.insert(p).second) << "shared prime " << p;
      }
    }
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b) {
        BigInt g;
        mpz_gcd(g.get_mpz_t(), res[a].w.value().get_mpz_t(), res[b].w.value().get_mpz_t());
        ASSERT_EQ(g, 1);
      }
  }
}

TEST(Approx, MonotoneRefinement) {
  const auto phi = builtin("phi_over_n");
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const Rational C(BigInt(static_cast<unsigned long>(30 + rng() % 69)), BigInt(100));
    Rational tol(BigInt(1), BigInt(10));
    Rational prev_err = Rational(1);
    for (int k = 0; k < 12; ++k) {
      const auto r = approx_value(phi, C, {}, tol);
      const Rational err = abs_error(r.achieved, C);
      ASSERT_LE(err, tol);
      ASSERT_LE(err, prev_err) << C.str() << " tol " << tol.str();
      prev_err = err;
      tol /= Rational(2);
    }
  }
}

TEST(Approx, WidthLimit) {
  ApproxLimits lim;
  lim.max_w_bits = 64;
  EXPECT_THROW(approx_value(builtin("phi_over_n"), q(1, 10), {}, q(1, 1000), lim), LimitExceeded);
}

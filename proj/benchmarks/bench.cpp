#include <benchmark/benchmark.h>

#include "mftuple/approx.hpp"
#include "mftuple/construct.hpp"
#include "mftuple/factor.hpp"
#include "mftuple/primality.hpp"
#include "mftuple/search.hpp"
#include "mftuple/verify.hpp"

using namespace mft;

namespace {

Rational q(long n, long d) { return {BigInt(n), BigInt(d)}; }

const ConstructionPlan& worked_plan() {
  static const ConstructionPlan plan =
      build_plan(builtin("phi_over_n"), TupleSpec({1}, {0, 2}), {q(1, 4)}, q(1, 10));
  return plan;
}

void BM_IsPrimeU64(benchmark::State& state) {
  std::uint64_t n = 0xffffffff00000001ull;
  for (auto _ : state) benchmark::DoNotOptimize(is_prime_u64(n += 2));
}
BENCHMARK(BM_IsPrimeU64);

void BM_IsPrimeBig(benchmark::State& state) {
  const BigInt p = find_row("2", "golden").p;
  for (auto _ : state) benchmark::DoNotOptimize(is_prime(p));
}
BENCHMARK(BM_IsPrimeBig);

void BM_SieveSegment(benchmark::State& state) {
  const auto residues = sieve_residues(worked_plan(), static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sieve_segment(residues, BigInt(1'000'000), 1 << 20));
  state.SetItemsProcessed(state.iterations() * (1 << 20));
}
BENCHMARK(BM_SieveSegment)->Arg(1'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_FactorGammaNeighbour(benchmark::State& state) {
  const BigInt n = find_row("1", "gamma").p + 1;
  for (auto _ : state) benchmark::DoNotOptimize(factor(n));
}
BENCHMARK(BM_FactorGammaNeighbour)->Unit(benchmark::kMillisecond);

void BM_GreedyRatio(benchmark::State& state) {
  const auto f = builtin("phi_over_n");
  for (auto _ : state) benchmark::DoNotOptimize(greedy_ratio(f, {}, q(1, 5), 0));
}
BENCHMARK(BM_GreedyRatio);

void BM_ApproxValue(benchmark::State& state) {
  const auto f = builtin("phi_over_n");
  const Rational tol(BigInt(1), BigInt(static_cast<unsigned long>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(approx_value(f, q(1, 2), {2, 3}, tol));
}
BENCHMARK(BM_ApproxValue)->Arg(1'000)->Arg(1'000'000)->Arg(1'000'000'000);

void BM_WorkedPlanSearch(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(find_hit(worked_plan(), SearchConfig{}));
}
BENCHMARK(BM_WorkedPlanSearch)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();

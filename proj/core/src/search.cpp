#include "mftuple/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "mftuple/error.hpp"
#include "mftuple/sieve.hpp"

namespace mft {

namespace {

__extension__ using u128 = unsigned __int128;

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(p) : t);
}

constexpr std::size_t kNearMissKeep = 16;

bool inside(const PositiveValue& v, const Rational& target, const Rational& eps) {
  return compare(v, target * (Rational(1) - eps)) == std::strong_ordering::greater &&
         compare(v, target * (Rational(1) + eps)) == std::strong_ordering::less;
}

double relative_error(const PositiveValue& v, const Rational& target) {
  return std::expm1((v / PositiveValue(target)).log_approx());
}

PositiveValue h_ratio(const BigInt& num, const BigInt& den, unsigned h_power) {
  return PositiveValue(Rational(num, den)).pow(h_power);
}

} // namespace

std::vector<LinearPolynomial> plan_polynomials(const ConstructionPlan& plan) {
  std::vector<LinearPolynomial> out = plan.h;
  out.insert(out.end(), plan.g.begin(), plan.g.end());
  return out;
}

std::vector<SieveResidues> sieve_residues(const std::vector<LinearPolynomial>& polys,
                                          std::uint64_t sieve_bound) {
  std::vector<SieveResidues> out;
  for (auto p : primes_upto(sieve_bound)) {
    SieveResidues sr{p, {}};
    for (const auto& q : polys) {
      const std::uint64_t a = mod_u64(q.leading, p);
      const std::uint64_t b = mod_u64(q.constant, p);
      if (a == 0) {
        if (b == 0)
          throw Error("plan admits no candidates: " + q.str() + " is divisible by " +
                      std::to_string(p) + " for every t");
        continue;
      }
      const auto r = static_cast<std::uint64_t>(
          static_cast<u128>((p - b) % p) * inverse_mod(a, p) % p);
      sr.forbidden.push_back(r);
    }
    std::sort(sr.forbidden.begin(), sr.forbidden.end());
    sr.forbidden.erase(std::unique(sr.forbidden.begin(), sr.forbidden.end()), sr.forbidden.end());
    if (sr.forbidden.size() >= p)
      throw Error("plan admits no candidates: every residue mod " + std::to_string(p) +
                  " is forbidden");
    if (!sr.forbidden.empty()) out.push_back(std::move(sr));
  }
  return out;
}

std::vector<SieveResidues> sieve_residues(const ConstructionPlan& plan, std::uint64_t sieve_bound) {
  return sieve_residues(plan_polynomials(plan), sieve_bound);
}

std::vector<std::uint64_t> sieve_segment(const std::vector<SieveResidues>& residues,
                                         const BigInt& t_start, std::uint64_t length) {
  std::vector<std::uint8_t> hit(length, 0);
  for (const auto& sr : residues) {
    const std::uint64_t p = sr.prime;
    const std::uint64_t base = mod_u64(t_start, p);
    for (auto r : sr.forbidden)
      for (std::uint64_t k = (r + p - base) % p; k < length; k += p) hit[k] = 1;
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 0; k < length; ++k)
    if (!hit[k]) out.push_back(k);
  return out;
}

std::optional<SearchHit> accept_candidate(const ConstructionPlan& plan, const BigInt& t,
                                          std::vector<PrimalityResult> verdicts,
                                          std::vector<double>* errors) {
  if (errors) errors->clear();
  const std::size_t d = plan.spec.d();
  const BigInt p_L = from_u64(plan.small_primes.back());
  std::vector<BigInt> gv;
  for (std::size_t i = 0; i < d; ++i) {
    gv.push_back(plan.g[i](t));
    if (gv.back() <= plan.w[i].value() || gv.back() <= p_L) return std::nullopt;
  }

  SearchHit hit;
  hit.t = t;
  hit.n = plan.h0(t);
  hit.primality = std::move(verdicts);
  const MultiplicativeFunction f = plan.function();
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<PrimePower> pp;
    for (std::size_t j = 0; j < plan.L; ++j)
      if (plan.x[i][j]) pp.push_back({from_u64(plan.small_primes[j]), plan.x[i][j]});
    for (const auto& q : plan.w[i].factors()) pp.push_back(q);
    BigInt cof = 1;
    auto status = CofactorStatus::unit;
    if (fits_u64(gv[i])) {
      pp.push_back({gv[i], 1});
    } else {
      cof = gv[i];
      status = CofactorStatus::probable_prime;
    }
    hit.shifted.emplace_back(std::move(pp), cof, status);
    hit.values.push_back(eval_factored(f, hit.shifted.back()));
  }

  const Goal& goal = plan.goal;
  bool ok = true;
  std::vector<double> err;
  if (goal.mode == GoalMode::value) {
    for (std::size_t i = 0; i < d; ++i) {
      ok = ok && inside(hit.values[i], goal.targets[i], goal.epsilon);
      err.push_back(relative_error(hit.values[i], goal.targets[i]));
    }
  } else {
    std::vector<PositiveValue> ratios;
    for (std::size_t i = 1; i < d; ++i) {
      const std::size_t num = goal.mode == GoalMode::ratio_anchored ? i : i - 1;
      const std::size_t den = goal.mode == GoalMode::ratio_anchored ? 0 : i;
      ratios.push_back(hit.values[num] / hit.values[den] *
                       h_ratio(hit.shifted[num].value(), hit.shifted[den].value(), goal.h_power));
    }
    for (std::size_t i = 0; i + 1 < d; ++i) {
      ok = ok && inside(ratios[i], goal.targets[i], goal.epsilon);
      err.push_back(relative_error(ratios[i], goal.targets[i]));
    }
    hit.ratios = std::move(ratios);
  }
  hit.errors = err;
  if (errors) *errors = std::move(err);
  if (!ok) return std::nullopt;
  return hit;
}

SearchOutcome find_hit(const ConstructionPlan& plan, const SearchConfig& config) {
  if (config.segment_length < 1) throw InvalidArgument("segment_length must be positive");
  if (config.worker_count < 1) throw InvalidArgument("worker_count must be positive");
  if (config.sieve_bound < plan.small_primes.back())
    throw InvalidArgument("sieve_bound must be at least p_L = " +
                          std::to_string(plan.small_primes.back()));
  if (sgn(config.t_start) < 0) throw InvalidArgument("t_start must be nonnegative");

  const auto start_time = std::chrono::steady_clock::now();
  const std::vector<LinearPolynomial> polys = plan_polynomials(plan);
  const std::vector<SieveResidues> residues = sieve_residues(polys, config.sieve_bound);

  std::vector<std::size_t> order(polys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (polys[a].leading != polys[b].leading) return polys[a].leading < polys[b].leading;
    return polys[a].constant < polys[b].constant;
  });

  // Below this t some polynomial value is <= sieve_bound and may be a sieving
  // prime itself, so those t bypass the sieve.
  BigInt small_t = -1;
  const BigInt bound = from_u64(config.sieve_bound);
  for (const auto& q : polys) {
    if (q.constant > bound) continue;
    BigInt tb;
    mpz_fdiv_q(tb.get_mpz_t(), BigInt(bound - q.constant).get_mpz_t(), q.leading.get_mpz_t());
    small_t = std::max(small_t, tb);
  }

  std::atomic<std::uint64_t> next_segment{0};
  std::atomic<std::uint64_t> best_segment{std::numeric_limits<std::uint64_t>::max()};
  std::atomic<bool> out_of_time{false};
  std::mutex mu;
  SearchOutcome outcome;

  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  };

  auto worker = [&] {
    SearchStats local;
    std::vector<NearMiss> misses;
    for (;;) {
      const std::uint64_t k = next_segment.fetch_add(1);
      if (k >= config.max_segments || k > best_segment.load() || out_of_time.load()) break;
      const BigInt seg_start = config.t_start + from_u64(k) * from_u64(config.segment_length);
      std::vector<std::uint64_t> cand = sieve_segment(residues, seg_start, config.segment_length);
      if (small_t >= seg_start) {
        const BigInt span = small_t - seg_start + 1;
        const std::uint64_t upto =
            span >= from_u64(config.segment_length) ? config.segment_length : to_u64(span);
        std::vector<std::uint64_t> all(upto);
        std::iota(all.begin(), all.end(), std::uint64_t{0});
        std::vector<std::uint64_t> merged;
        std::set_union(all.begin(), all.end(), cand.begin(), cand.end(),
                       std::back_inserter(merged));
        cand = std::move(merged);
      }
      ++local.segments;
      local.candidates += config.segment_length;
      local.survivors += cand.size();

      std::optional<SearchHit> found;
      std::size_t checked = 0;
      for (auto off : cand) {
        if ((++checked & 255) == 0) {
          if (k > best_segment.load()) break;
          if (config.time_limit > 0 && elapsed() > config.time_limit) {
            out_of_time = true;
            break;
          }
        }
        const BigInt t = seg_start + from_u64(off);
        std::vector<PrimalityResult> verdicts(polys.size());
        bool all_prime = true;
        for (auto idx : order) {
          const BigInt v = polys[idx](t);
          ++local.primality_tests;
          verdicts[idx] = v < 2 ? PrimalityResult{Verdict::composite, PrimalityMethod::trial_division, {}}
                                : is_prime(v, config.primality);
          if (!verdicts[idx].is_prime()) {
            all_prime = false;
            break;
          }
        }
        if (!all_prime) continue;
        ++local.full_passes;
        std::vector<double> errs;
        found = accept_candidate(plan, t, std::move(verdicts), &errs);
        if (found) break;
        if (!errs.empty()) {
          ++local.near_misses;
          if (misses.size() < kNearMissKeep) misses.push_back({t, std::move(errs)});
        }
      }
      if (found) {
        std::lock_guard lock(mu);
        if (k < best_segment.load()) {
          best_segment = k;
          outcome.hit = std::move(found);
        }
      }
      if (out_of_time.load()) break;
    }
    std::lock_guard lock(mu);
    outcome.stats.segments += local.segments;
    outcome.stats.candidates += local.candidates;
    outcome.stats.survivors += local.survivors;
    outcome.stats.primality_tests += local.primality_tests;
    outcome.stats.full_passes += local.full_passes;
    outcome.stats.near_misses += local.near_misses;
    for (auto& m : misses)
      if (outcome.near_misses.size() < kNearMissKeep) outcome.near_misses.push_back(std::move(m));
  };

  if (config.worker_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < config.worker_count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::sort(outcome.near_misses.begin(), outcome.near_misses.end(),
            [](const NearMiss& a, const NearMiss& b) { return a.t < b.t; });
  outcome.stats.seconds = elapsed();
  if (!outcome.hit)
    outcome.reason = out_of_time ? "time limit of " + std::to_string(config.time_limit) +
                                       " s reached"
                                 : "max_segments " + std::to_string(config.max_segments) +
                                       " exhausted";
  return outcome;
}

std::string hit_report(const ConstructionPlan& plan, const SearchHit& hit, unsigned digits) {
  std::ostringstream os;
  os << "t = " << to_decimal(hit.t) << "\n";
  os << "n = " << to_decimal(hit.n) << "\n";
  const auto polys = plan_polynomials(plan);
  for (std::size_t i = 0; i < polys.size() && i < hit.primality.size(); ++i)
    os << (i < plan.h.size() ? "h_" + std::to_string(i + 1) : "g_" + std::to_string(i + 1 - plan.h.size()))
       << "(t) " << to_string(hit.primality[i].verdict) << "\n";
  const Goal& goal = plan.goal;
  auto line = [&](const std::string& label, const PositiveValue& v, const Rational& target) {
    const std::string shown = to_decimal(v, digits, DecimalMode::round_nearest);
    const unsigned matched = count_matching_digits(to_decimal(v, digits, DecimalMode::truncate),
                                                   truncated_decimal(target, digits));
    os << label << " = " << shown << "  target " << truncated_decimal(target, digits)
       << "  matched digits " << matched << "\n";
  };
  for (std::size_t i = 0; i < hit.values.size(); ++i) {
    const std::string label = "f(n" + std::string(plan.spec.alphas()[i] < 0 ? "" : "+") +
                              std::to_string(plan.spec.alphas()[i]) + ")";
    if (goal.mode == GoalMode::value)
      line(label, hit.values[i], goal.targets[i]);
    else
      os << label << " = " << to_decimal(hit.values[i], digits) << "\n";
  }
  if (hit.ratios)
    for (std::size_t i = 0; i < hit.ratios->size(); ++i)
      line("ratio_" + std::to_string(i + 1), (*hit.ratios)[i], goal.targets[i]);
  return os.str();
}

} // namespace mft

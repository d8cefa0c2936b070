#include "mftuple/approx.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "mftuple/error.hpp"
#include "mftuple/primality.hpp"

namespace mft {

namespace {

/// Unreduced coefficient * e^exponent, used while multiplying many rule values.
struct RawProduct {
  BigInt num = 1, den = 1, exp_num = 0, exp_den = 1;

  void absorb(const RawProduct& o) {
    num *= o.num;
    den *= o.den;
    exp_num = exp_num * o.exp_den + o.exp_num * exp_den;
    exp_den *= o.exp_den;
  }

  PositiveValue value() const {
    return {Rational(num, den), Rational(exp_num, exp_den)};
  }
};

/// The stream q_1, q_2, ... with prefix sums of log f(q_i), loaded on demand.
/// Screening uses the prefix sums; every decision the sums cannot settle with
/// margin is made with exact arithmetic.
class PrefixScanner {
public:
  PrefixScanner(const MultiplicativeFunction& f, const StreamSpec& spec, const ApproxLimits& limits)
      : f_(f), stream_(spec.lower, std::min(spec.cap, limits.stream_cap), spec.avoid),
        cap_(std::min(spec.cap, limits.stream_cap)) {
    log_prefix_.push_back(0);
    abs_prefix_.push_back(0);
    bits_prefix_.push_back(0);
  }

  std::size_t loaded() const { return primes_.size(); }

  /// Loads primes until index n (1-based) exists; false when the stream ends.
  bool ensure(std::size_t n) {
    while (primes_.size() < n) {
      auto q = stream_.next();
      if (!q) return false;
      const PositiveValue v = f_.at(from_u64(*q), 1);
      values_.push_back(v);
      const Rational c1 = v.coefficient() - Rational(1);
      const double cd = c1.to_double();
      const long double term =
          (std::abs(cd) < 0.5 ? std::log1p(cd) : std::log(v.coefficient().to_double())) +
          v.exponent().to_double();
      if (compare(v, Rational(1)) != std::strong_ordering::less) monotone_ = false;
      primes_.push_back(*q);
      log_prefix_.push_back(log_prefix_.back() + term);
      abs_prefix_.push_back(abs_prefix_.back() + std::fabs(term));
      bits_prefix_.push_back(bits_prefix_.back() + std::log2(static_cast<double>(*q)));
    }
    return true;
  }

  std::uint64_t prime(std::size_t i) const { return primes_[i - 1]; }
  const PositiveValue& value(std::size_t i) const { return values_[i - 1]; }
  bool monotone() const { return monotone_; }
  std::uint64_t cap() const { return cap_; }

  double bits(std::size_t s, std::size_t e) const { return bits_prefix_[e] - bits_prefix_[s]; }

  /// Sign of log(prod_{s<i<=e} f(q_i)) - log_threshold when the screen is
  /// decisive, nullopt otherwise.
  std::optional<int> screen(std::size_t s, std::size_t e, long double log_threshold) const {
    const long double diff = log_prefix_[e] - log_prefix_[s] - log_threshold;
    const long double margin =
        1e-12L * (1 + std::fabs(log_threshold)) + 1e-14L * (abs_prefix_[e] - abs_prefix_[s]);
    if (diff > margin) return 1;
    if (diff < -margin) return -1;
    return std::nullopt;
  }

  PositiveValue product(std::size_t s, std::size_t e) const { return raw(s + 1, e).value(); }

  /// prod f(q_i) over (s, e] compared with threshold, screened first.
  std::strong_ordering compare_product(std::size_t s, std::size_t e, const Rational& threshold,
                                       long double log_threshold) const {
    if (auto sign = screen(s, e, log_threshold))
      return *sign > 0 ? std::strong_ordering::greater : std::strong_ordering::less;
    return compare(product(s, e), threshold);
  }

private:
  RawProduct raw(std::size_t lo, std::size_t hi) const {
    if (lo > hi) return {};
    if (lo == hi) {
      const PositiveValue& v = values_[lo - 1];
      return {v.coefficient().num(), v.coefficient().den(), v.exponent().num(),
              v.exponent().den()};
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    RawProduct left = raw(lo, mid);
    left.absorb(raw(mid + 1, hi));
    return left;
  }

  const MultiplicativeFunction& f_;
  PrimeStream stream_;
  std::uint64_t cap_;
  std::vector<std::uint64_t> primes_;
  std::vector<PositiveValue> values_;
  std::vector<long double> log_prefix_, abs_prefix_;
  std::vector<double> bits_prefix_;
  bool monotone_ = true;
};

long double log_of(const Rational& r) {
  long e_num = 0, e_den = 0;
  const double m_num = mpz_get_d_2exp(&e_num, r.raw().get_num_mpz_t());
  const double m_den = mpz_get_d_2exp(&e_den, r.raw().get_den_mpz_t());
  return std::log(static_cast<long double>(m_num) / m_den) +
         static_cast<long double>(e_num - e_den) * std::log(2.0L);
}

[[noreturn]] void stream_exhausted(const PrefixScanner& scan, std::size_t s) {
  std::string partial = "1";
  if (scan.loaded() > s) partial = to_decimal(scan.product(s, scan.loaded()), 12);
  throw LimitExceeded("prime stream cap " + std::to_string(scan.cap()) +
                      " reached before the partial product fell below the threshold "
                      "(partial product " + partial + ")");
}

[[noreturn]] void too_wide(const ApproxLimits& limits) {
  throw LimitExceeded("approximation needs a multiplier w wider than " +
                      std::to_string(limits.max_w_bits) + " bits (max_w_bits)");
}

/// Least e > s with product over (s, e] <= threshold, searching from e_hint.
std::size_t least_end(PrefixScanner& scan, std::size_t s, std::size_t e_hint,
                      const Rational& threshold, long double log_threshold,
                      const ApproxLimits& limits) {
  std::size_t e = std::max(e_hint, s + 1);
  for (;;) {
    if (!scan.ensure(e)) stream_exhausted(scan, s);
    if (scan.bits(s, e) > static_cast<double>(limits.max_w_bits)) too_wide(limits);
    if (scan.compare_product(s, e, threshold, log_threshold) != std::strong_ordering::greater)
      return e;
    ++e;
  }
}

GreedyResult make_result(const PrefixScanner& scan, std::size_t s, std::size_t e) {
  std::vector<PrimePower> factors;
  factors.reserve(e - s);
  for (std::size_t i = s + 1; i <= e; ++i) factors.push_back({from_u64(scan.prime(i)), 1});
  GreedyResult out;
  out.w = FactoredInteger(std::move(factors), BigInt(1), CofactorStatus::unit);
  out.start_index = s;
  out.end_index = e;
  out.achieved = scan.product(s, e);
  out.last_prime = from_u64(scan.prime(e));
  return out;
}

void require_unit_interval(const Rational& C, const char* what) {
  if (C.sign() <= 0 || C >= Rational(1))
    throw InvalidArgument(std::string(what) + ": threshold must lie in (0, 1), got " + C.str());
}

std::optional<std::uint64_t> next_prime_from(std::uint64_t x, const StreamSpec& stream) {
  if (x < 2) x = 2;
  for (;; ++x) {
    if (x > stream.cap) return std::nullopt;
    if (is_prime_u64(x) && !stream.avoid.count(x)) return x;
  }
}

/// Least integer x >= from with f(x) >= need, treating the prime rule as a
/// formula in x. Requires f.monotone_at_primes (increasing for an oriented f).
std::optional<std::uint64_t> least_argument(const MultiplicativeFunction& f, const PositiveValue& need,
                                            std::uint64_t from, std::uint64_t cap) {
  auto ok = [&](std::uint64_t x) {
    return compare(f.at(from_u64(x), 1), need) != std::strong_ordering::less;
  };
  if (ok(from)) return from;
  std::uint64_t lo = from, hi = from;
  for (;;) {
    if (hi >= cap) return std::nullopt;
    lo = hi;
    hi = hi > cap / 2 ? cap : hi * 2;
    if (ok(hi)) break;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// Descent toward C from above: a prime q joins w exactly when f(w) f(q) >= C
/// still holds. The chosen primes do not depend on tau, which only decides
/// when to stop, so the error never grows as tau shrinks. Returns w with
/// C <= f(w) <= C + tau. `f` must be oriented toward zero with f(q) < 1.
GreedyResult descend(const MultiplicativeFunction& f, const Rational& C, const Rational& tau,
                     const StreamSpec& stream, const ApproxLimits& limits) {
  PositiveValue cur = PositiveValue::one();
  const Rational upper = C + tau;
  std::vector<PrimePower> primes;
  double bits = 0;
  std::uint64_t from = stream.lower;
  auto exhausted = [&](std::uint64_t at) -> GreedyResult {
    throw LimitExceeded("prime stream cap " + std::to_string(stream.cap) + " reached at " +
                        std::to_string(at) + " with f(w) = " + to_decimal(cur, 12) +
                        " still above C + tolerance");
  };
  while (compare(cur, upper) == std::strong_ordering::greater) {
    const PositiveValue need = PositiveValue(C) / cur;
    auto q = next_prime_from(from, stream);
    if (!q) return exhausted(from);
    if (compare(f.at(from_u64(*q), 1), need) == std::strong_ordering::less) {
      if (!f.monotone_at_primes) {
        from = *q + 1;
        continue;
      }
      const auto x = least_argument(f, need, *q, stream.cap);
      if (!x) return exhausted(*q);
      q = next_prime_from(*x, stream);
      if (!q) return exhausted(*x);
    }
    cur *= f.at(from_u64(*q), 1);
    primes.push_back({from_u64(*q), 1});
    bits += std::log2(static_cast<double>(*q));
    if (bits > static_cast<double>(limits.max_w_bits)) too_wide(limits);
    from = *q + 1;
  }
  GreedyResult out;
  out.end_index = primes.size();
  out.last_prime = primes.empty() ? BigInt(1) : primes.back().prime;
  out.w = FactoredInteger(std::move(primes), BigInt(1), CofactorStatus::unit);
  out.achieved = cur;
  return out;
}

} // namespace

GreedyResult greedy_ratio(const MultiplicativeFunction& f, const StreamSpec& stream,
                          const Rational& C, std::size_t start_index, const ApproxLimits& limits) {
  require_unit_interval(C, "greedy_ratio");
  PrefixScanner scan(f, stream, limits);
  if (!scan.ensure(start_index + 1)) stream_exhausted(scan, start_index);
  const std::size_t e = least_end(scan, start_index, start_index + 1, C, log_of(C), limits);
  return make_result(scan, start_index, e);
}

GreedyResult approx_value(const MultiplicativeFunction& f, const Rational& C,
                          const std::set<std::uint64_t>& avoid, const Rational& tolerance,
                          const ApproxLimits& limits) {
  if (tolerance.sign() <= 0) throw InvalidArgument("approx_value: tolerance must be positive");
  StreamSpec stream;
  stream.avoid = avoid;
  stream.cap = limits.stream_cap;
  if (f.divergence == Divergence::to_zero) {
    require_unit_interval(C, "approx_value");
    return descend(f, C, tolerance, stream, limits);
  }
  // 1/C <= (1/f)(w) <= 1/C + tol/C^2 gives C^2/(C + tol) <= f(w) <= C.
  if (C <= Rational(1))
    throw InvalidArgument("approx_value: a function diverging to infinity needs C > 1, got " +
                          C.str());
  GreedyResult r = descend(reciprocal(f), C.reciprocal(), tolerance / (C * C), stream, limits);
  r.achieved = r.achieved.reciprocal();
  return r;
}

std::vector<GreedyResult> approx_tuple(const MultiplicativeFunction& f,
                                       const std::vector<Rational>& targets,
                                       const std::set<std::uint64_t>& avoid,
                                       const std::vector<Rational>& tolerances,
                                       const ApproxLimits& limits) {
  if (targets.size() != tolerances.size())
    throw InvalidArgument("approx_tuple: one tolerance per target is required");
  std::set<std::uint64_t> excluded = avoid;
  std::vector<GreedyResult> out;
  out.reserve(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    GreedyResult r = approx_value(f, targets[i], excluded, tolerances[i], limits);
    for (const auto& pp : r.w.factors()) excluded.insert(to_u64(pp.prime));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<GreedyResult> approx_tuple(const MultiplicativeFunction& f,
                                       const std::vector<Rational>& targets,
                                       const std::set<std::uint64_t>& avoid,
                                       const Rational& tolerance, const ApproxLimits& limits) {
  return approx_tuple(f, targets, avoid, std::vector<Rational>(targets.size(), tolerance), limits);
}

} // namespace mft

#include "mftuple/sieve.hpp"

#include <algorithm>
#include <cmath>

namespace mft {

namespace {

constexpr std::uint64_t kSegmentSpan = 1u << 20;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

} // namespace

std::vector<std::uint64_t> primes_upto(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (bound < 2) return out;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t i = 2; i * i <= bound; ++i) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  for (std::uint64_t i = 2; i <= bound; ++i)
    if (!composite[i]) out.push_back(i);
  return out;
}

std::uint64_t prime_count(std::uint64_t x) { return primes_upto(x).size(); }

const std::vector<std::uint64_t>& small_prime_table() {
  static const std::vector<std::uint64_t> table = primes_upto(kSmallPrimeTableBound);
  return table;
}

PrimeStream::PrimeStream(std::uint64_t lower, std::uint64_t cap, std::set<std::uint64_t> excluded)
    : cap_(cap), excluded_(std::move(excluded)), segment_low_(std::max<std::uint64_t>(lower, 2)) {}

std::optional<std::uint64_t> PrimeStream::next() {
  for (;;) {
    while (cursor_ < buffer_.size()) {
      const std::uint64_t p = buffer_[cursor_++];
      if (!excluded_.contains(p)) return p;
    }
    if (exhausted_) return std::nullopt;
    refill();
  }
}

void PrimeStream::refill() {
  buffer_.clear();
  cursor_ = 0;
  if (segment_low_ > cap_) {
    exhausted_ = true;
    return;
  }
  const std::uint64_t low = segment_low_;
  const std::uint64_t high = std::min(cap_, low + kSegmentSpan - 1);

  const std::uint64_t needed = isqrt(high);
  if (needed > base_limit_) {
    const std::uint64_t new_limit = std::max(needed, base_limit_ * 2);
    base_primes_ = primes_upto(new_limit);
    base_limit_ = new_limit;
  }

  std::vector<bool> composite(high - low + 1, false);
  for (std::uint64_t p : base_primes_) {
    if (p * p > high) break;
    std::uint64_t start = std::max(p * p, (low + p - 1) / p * p);
    for (std::uint64_t m = start; m <= high; m += p) composite[m - low] = true;
  }
  for (std::uint64_t v = low; v <= high; ++v)
    if (v >= 2 && !composite[v - low]) buffer_.push_back(v);

  if (high == cap_) exhausted_ = true;
  segment_low_ = high + 1;
}

} // namespace mft

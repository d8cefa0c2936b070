#pragma once

#include <compare>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "mftuple/bigint.hpp"

namespace mft {

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const BigInt& integer) : q_(integer) {}
  Rational(const BigInt& num, const BigInt& den);
  explicit Rational(const mpq_class& q);

  /// Parses "a", "a/b", or a decimal literal such as "-3.14159", "1e-3",
  /// "2.5E+2". Decimal literals are converted exactly.
  static Rational parse(std::string_view text);

  BigInt num() const { return q_.get_num(); }
  BigInt den() const { return q_.get_den(); }
  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  const mpq_class& raw() const { return q_; }

  /// "n/d", or "n" when the denominator is 1.
  std::string str() const;

  /// Closest double; for screening only.
  double to_double() const { return q_.get_d(); }

  Rational reciprocal() const;
  Rational abs() const;

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

private:
  mpq_class q_;
};

/// Floor of a rational as an integer.
BigInt floor(const Rational& r);

/// Truncated decimal expansion (toward zero) with exactly `digits` places.
std::string truncated_decimal(const Rational& r, unsigned digits);

/// Renders scaled / 10^digits with exactly `digits` places.
std::string format_fixed(const BigInt& scaled, unsigned digits);

/// Decimal expansion rounded to nearest (ties away from zero) with `digits`
/// places.
std::string rounded_decimal(const Rational& r, unsigned digits);

} // namespace mft

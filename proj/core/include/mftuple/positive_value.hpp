#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <utility>

#include "mftuple/rational.hpp"

namespace mft {

/// A positive real of the form coefficient * e^exponent with both parts
/// rational. Pure rationals (exponent 0) are the `exact` kind; pure
/// exponentials (coefficient 1) are `log_exact`. Products of the two kinds
/// stay exact in this representation and are ordered by certified
/// multiprecision evaluation.
class PositiveValue {
public:
  enum class Kind { exact, log_exact, mixed };

  PositiveValue() = default;
  /// Exact rational value; must be > 0.
  explicit PositiveValue(Rational value);
  PositiveValue(Rational coefficient, Rational exponent);

  static PositiveValue exp(Rational exponent) { return {Rational(1), std::move(exponent)}; }
  static PositiveValue one() { return {}; }

  const Rational& coefficient() const { return coefficient_; }
  const Rational& exponent() const { return exponent_; }
  Kind kind() const;
  bool is_exact() const { return exponent_.is_zero(); }

  PositiveValue reciprocal() const;
  PositiveValue pow(unsigned k) const;

  PositiveValue& operator*=(const PositiveValue& o);
  PositiveValue& operator/=(const PositiveValue& o);
  friend PositiveValue operator*(PositiveValue a, const PositiveValue& b) { return a *= b; }
  friend PositiveValue operator/(PositiveValue a, const PositiveValue& b) { return a /= b; }

  /// Representation equality (which is value equality for this class).
  friend bool operator==(const PositiveValue&, const PositiveValue&) = default;

  /// Natural log in double precision, for screening and display only.
  double log_approx() const;
  double to_double() const;

  /// "n/d", "exp(q)", or "n/d*exp(q)".
  std::string str() const;

private:
  Rational coefficient_{1};
  Rational exponent_{0};
};

/// Certified ordering. Exact when the exponents agree; otherwise evaluates
/// with MPFR at doubling precision until the enclosures separate.
std::strong_ordering compare(const PositiveValue& a, const PositiveValue& b);
std::strong_ordering compare(const PositiveValue& a, const Rational& b);

enum class DecimalMode { round_nearest, truncate };

/// Decimal rendering with exactly `digits` places, certified correct for the
/// requested mode.
std::string to_decimal(const PositiveValue& v, unsigned digits,
                       DecimalMode mode = DecimalMode::round_nearest);

/// Rational enclosure lo <= v <= hi with hi - lo <= 10^-digits * max(1, v).
std::pair<Rational, Rational> rational_enclosure(const PositiveValue& v, unsigned digits);

/// Number of significant digits two decimal renderings share as a literal
/// prefix. Integer parts must have the same length; leading zeros do not
/// count. For example ("0.5772156649015306", "0.5772156649015328") -> 14.
unsigned count_matching_digits(std::string_view a, std::string_view b);

} // namespace mft

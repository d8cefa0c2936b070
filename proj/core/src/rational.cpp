#include "mftuple/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <string>

#include "mftuple/error.hpp"

namespace mft {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt pow10(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

} // namespace

BigInt parse_bigint(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (!all_digits(body))
    throw InvalidArgument("not an integer: '" + std::string(text) + "'");
  BigInt r(std::string(body), 10);
  return negative ? BigInt(-r) : r;
}

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos)
    return Rational(parse_bigint(text.substr(0, slash)), parse_bigint(text.substr(slash + 1)));

  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = body.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6)
      throw InvalidArgument("bad exponent in '" + std::string(text) + "'");
    exponent = std::strtol(std::string(exp_text).c_str(), nullptr, 10);
    if (exp_negative) exponent = -exponent;
    body = body.substr(0, e);
  }
  std::string_view int_part = body;
  std::string_view frac_part;
  if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    int_part = body.substr(0, dot);
    frac_part = body.substr(dot + 1);
  }
  if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part)))
    throw InvalidArgument("not a number: '" + std::string(text) + "'");

  std::string digits = std::string(int_part) + std::string(frac_part);
  BigInt mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  exponent -= static_cast<long>(frac_part.size());
  if (exponent >= 0) return Rational(BigInt(mantissa * pow10(static_cast<unsigned long>(exponent))));
  return Rational(mantissa, pow10(static_cast<unsigned long>(-exponent)));
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw InvalidArgument("reciprocal of zero");
  return Rational(den(), num());
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw InvalidArgument("division by zero");
  q_ /= o.q_;
  return *this;
}

BigInt floor(const Rational& r) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), r.raw().get_num_mpz_t(), r.raw().get_den_mpz_t());
  return out;
}

namespace {

std::string format_scaled(BigInt scaled, bool negative, unsigned digits) {
  std::string s = scaled.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  std::string out = negative ? "-" : "";
  out += s.substr(0, s.size() - digits);
  if (digits > 0) out += "." + s.substr(s.size() - digits);
  return out;
}

} // namespace

std::string format_fixed(const BigInt& scaled, unsigned digits) {
  return format_scaled(abs(scaled), sgn(scaled) < 0, digits);
}

std::string truncated_decimal(const Rational& r, unsigned digits) {
  const bool negative = r.sign() < 0;
  const Rational a = r.abs();
  BigInt scaled = a.num() * pow10(digits);
  mpz_tdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), a.raw().get_den_mpz_t());
  return format_scaled(scaled, negative && scaled != 0, digits);
}

std::string rounded_decimal(const Rational& r, unsigned digits) {
  const bool negative = r.sign() < 0;
  const Rational a = r.abs();
  // floor(a * 10^digits + 1/2)
  BigInt scaled = 2 * a.num() * pow10(digits) + a.den();
  BigInt twice_den = 2 * a.den();
  mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), twice_den.get_mpz_t());
  return format_scaled(scaled, negative && scaled != 0, digits);
}

} // namespace mft

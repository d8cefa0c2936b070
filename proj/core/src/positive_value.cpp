#include "mftuple/positive_value.hpp"

#include <cmath>

#include <mpfr.h>

#include "mftuple/error.hpp"

namespace mft {

namespace {

class Mpfr {
public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

private:
  mpfr_t v_;
};

/// [lo, hi] enclosure of v at the given working precision.
void enclose(const PositiveValue& v, mpfr_prec_t prec, Mpfr& lo, Mpfr& hi) {
  Mpfr e_lo(prec), e_hi(prec);
  mpfr_set_q(lo.get(), v.coefficient().raw().get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi.get(), v.coefficient().raw().get_mpq_t(), MPFR_RNDU);
  if (!v.exponent().is_zero()) {
    mpfr_set_q(e_lo.get(), v.exponent().raw().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(e_hi.get(), v.exponent().raw().get_mpq_t(), MPFR_RNDU);
    mpfr_exp(e_lo.get(), e_lo.get(), MPFR_RNDD);
    mpfr_exp(e_hi.get(), e_hi.get(), MPFR_RNDU);
    mpfr_mul(lo.get(), lo.get(), e_lo.get(), MPFR_RNDD);
    mpfr_mul(hi.get(), hi.get(), e_hi.get(), MPFR_RNDU);
  }
}

constexpr mpfr_prec_t kMaxPrecision = mpfr_prec_t{1} << 26;

BigInt pow10(unsigned d) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, d);
  return r;
}

} // namespace

PositiveValue::PositiveValue(Rational value) : coefficient_(std::move(value)) {
  if (coefficient_.sign() <= 0)
    throw InvalidArgument("PositiveValue must be > 0, got " + coefficient_.str());
}

PositiveValue::PositiveValue(Rational coefficient, Rational exponent)
    : coefficient_(std::move(coefficient)), exponent_(std::move(exponent)) {
  if (coefficient_.sign() <= 0)
    throw InvalidArgument("PositiveValue coefficient must be > 0, got " + coefficient_.str());
}

PositiveValue::Kind PositiveValue::kind() const {
  if (exponent_.is_zero()) return Kind::exact;
  if (coefficient_ == Rational(1)) return Kind::log_exact;
  return Kind::mixed;
}

PositiveValue PositiveValue::reciprocal() const {
  return {coefficient_.reciprocal(), -exponent_};
}

PositiveValue PositiveValue::pow(unsigned k) const {
  PositiveValue out;
  for (unsigned i = 0; i < k; ++i) out *= *this;
  return out;
}

PositiveValue& PositiveValue::operator*=(const PositiveValue& o) {
  coefficient_ *= o.coefficient_;
  exponent_ += o.exponent_;
  return *this;
}

PositiveValue& PositiveValue::operator/=(const PositiveValue& o) {
  coefficient_ /= o.coefficient_;
  exponent_ -= o.exponent_;
  return *this;
}

double PositiveValue::log_approx() const {
  // log(n/d) via size-aware conversion so huge coefficients do not overflow.
  long e_num = 0, e_den = 0;
  const double m_num = mpz_get_d_2exp(&e_num, coefficient_.raw().get_num_mpz_t());
  const double m_den = mpz_get_d_2exp(&e_den, coefficient_.raw().get_den_mpz_t());
  const double log_coef =
      std::log(m_num / m_den) + static_cast<double>(e_num - e_den) * std::log(2.0);
  return log_coef + exponent_.to_double();
}

double PositiveValue::to_double() const { return std::exp(log_approx()); }

std::string PositiveValue::str() const {
  switch (kind()) {
  case Kind::exact: return coefficient_.str();
  case Kind::log_exact: return "exp(" + exponent_.str() + ")";
  case Kind::mixed: return coefficient_.str() + "*exp(" + exponent_.str() + ")";
  }
  return "?";
}

std::strong_ordering compare(const PositiveValue& a, const PositiveValue& b) {
  if (a.exponent() == b.exponent()) return a.coefficient() <=> b.coefficient();
  const PositiveValue ratio = a / b;
  for (mpfr_prec_t prec = 64; prec <= kMaxPrecision; prec *= 2) {
    Mpfr lo(prec), hi(prec);
    enclose(ratio, prec, lo, hi);
    if (mpfr_cmp_ui(lo.get(), 1) > 0) return std::strong_ordering::greater;
    if (mpfr_cmp_ui(hi.get(), 1) < 0) return std::strong_ordering::less;
  }
  throw Error("compare: precision limit reached for " + a.str() + " vs " + b.str());
}

std::strong_ordering compare(const PositiveValue& a, const Rational& b) {
  if (b.sign() <= 0) return std::strong_ordering::greater;
  return compare(a, PositiveValue(b));
}

std::string to_decimal(const PositiveValue& v, unsigned digits, DecimalMode mode) {
  if (v.is_exact())
    return mode == DecimalMode::truncate ? truncated_decimal(v.coefficient(), digits)
                                         : rounded_decimal(v.coefficient(), digits);
  const BigInt scale = pow10(digits);
  mpfr_prec_t prec = static_cast<mpfr_prec_t>(digits * 3.33) + 64 +
                     static_cast<mpfr_prec_t>(std::abs(v.log_approx()) * 1.45);
  for (; prec <= kMaxPrecision; prec *= 2) {
    Mpfr lo(prec), hi(prec);
    enclose(v, prec, lo, hi);
    mpfr_mul_z(lo.get(), lo.get(), scale.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(hi.get(), hi.get(), scale.get_mpz_t(), MPFR_RNDU);
    if (mode == DecimalMode::round_nearest) {
      mpfr_add_d(lo.get(), lo.get(), 0.5, MPFR_RNDD);
      mpfr_add_d(hi.get(), hi.get(), 0.5, MPFR_RNDU);
    }
    BigInt flo, fhi;
    mpfr_get_z(flo.get_mpz_t(), lo.get(), MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), hi.get(), MPFR_RNDD);
    if (flo == fhi) return format_fixed(flo, digits);
  }
  throw Error("to_decimal: precision limit reached for " + v.str());
}

std::pair<Rational, Rational> rational_enclosure(const PositiveValue& v, unsigned digits) {
  if (v.is_exact()) return {v.coefficient(), v.coefficient()};
  const Rational width_unit(BigInt(1), pow10(digits));
  mpfr_prec_t prec = static_cast<mpfr_prec_t>(digits * 3.33) + 64;
  for (; prec <= kMaxPrecision; prec *= 2) {
    Mpfr lo(prec), hi(prec);
    enclose(v, prec, lo, hi);
    mpq_class qlo, qhi;
    mpfr_get_q(qlo.get_mpq_t(), lo.get());
    mpfr_get_q(qhi.get_mpq_t(), hi.get());
    Rational rlo(qlo), rhi(qhi);
    const Rational scale = rlo > Rational(1) ? rlo : Rational(1);
    if (rhi - rlo <= width_unit * scale && rlo.sign() > 0) return {rlo, rhi};
  }
  throw Error("rational_enclosure: precision limit reached for " + v.str());
}

unsigned count_matching_digits(std::string_view a, std::string_view b) {
  const auto int_len = [](std::string_view s) {
    const auto dot = s.find('.');
    return dot == std::string_view::npos ? s.size() : dot;
  };
  if (int_len(a) != int_len(b)) return 0;
  unsigned count = 0;
  bool significant = false;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) break;
    if (a[i] == '.') continue;
    if (a[i] != '0') significant = true;
    if (significant) ++count;
  }
  return count;
}

} // namespace mft

#pragma once

#include <json.hpp>

#include "mftuple/error.hpp"
#include "mftuple/factor.hpp"
#include "mftuple/positive_value.hpp"
#include "mftuple/primality.hpp"
#include "mftuple/rational.hpp"

namespace mft::codec {

using Json = nlohmann::ordered_json;

inline Json rational(const Rational& r) { return Json::array({to_decimal(r.num()), to_decimal(r.den())}); }

inline Rational rational(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("expected [num, den], got " + j.dump());
  return {parse_bigint(j[0].get<std::string>()), parse_bigint(j[1].get<std::string>())};
}

inline Json big(const BigInt& n) { return to_decimal(n); }
inline BigInt big(const Json& j) { return parse_bigint(j.get<std::string>()); }

/// [num, den] for rationals, {"log": [num, den]} for e^q, both keys when mixed.
inline Json value(const PositiveValue& v) {
  if (v.is_exact()) return rational(v.coefficient());
  Json out = Json::object();
  if (v.coefficient() != Rational(1)) out["coefficient"] = rational(v.coefficient());
  out["log"] = rational(v.exponent());
  return out;
}

inline PositiveValue value(const Json& j) {
  if (j.is_array()) return PositiveValue(rational(j));
  const Rational c = j.contains("coefficient") ? rational(j.at("coefficient")) : Rational(1);
  return {c, rational(j.at("log"))};
}

inline Json factored(const FactoredInteger& n) {
  Json factors = Json::array();
  for (const auto& pp : n.factors()) factors.push_back(Json::array({big(pp.prime), pp.exponent}));
  Json out = Json::object();
  out["value"] = big(n.value());
  out["factors"] = std::move(factors);
  out["cofactor"] = big(n.cofactor());
  out["cofactor_status"] = to_string(n.cofactor_status());
  return out;
}

inline CofactorStatus cofactor_status(const std::string& s) {
  if (s == "unit") return CofactorStatus::unit;
  if (s == "probable_prime") return CofactorStatus::probable_prime;
  if (s == "composite_unfactored") return CofactorStatus::composite_unfactored;
  throw InvalidArgument("unknown cofactor_status '" + s + "'");
}

inline FactoredInteger factored(const Json& j) {
  std::vector<PrimePower> pp;
  for (const auto& f : j.at("factors")) pp.push_back({big(f.at(0)), f.at(1).get<unsigned>()});
  FactoredInteger out(std::move(pp), big(j.at("cofactor")),
                      cofactor_status(j.at("cofactor_status").get<std::string>()));
  if (j.contains("value") && out.value() != big(j.at("value")))
    throw InvalidArgument("factored integer value does not match its factors");
  return out;
}

inline Json primality(const PrimalityResult& r) {
  Json out = Json::object();
  out["verdict"] = to_string(r.verdict);
  out["method"] = to_string(r.method);
  if (!r.witness_info.empty()) out["witness_info"] = r.witness_info;
  return out;
}

} // namespace mft::codec

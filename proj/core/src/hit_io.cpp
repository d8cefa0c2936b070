#include "mftuple/hit_io.hpp"

#include "json_codec.hpp"

namespace mft {

using codec::Json;

std::string outcome_to_json(const ConstructionPlan& plan, const SearchOutcome& outcome,
                            unsigned digits) {
  Json j = Json::object();
  j["version"] = kHitSchema;
  j["status"] = outcome.hit ? "hit" : "exhausted";
  if (const auto& hit = outcome.hit) {
    j["t"] = codec::big(hit->t);
    j["n"] = codec::big(hit->n);
    Json verdicts = Json::array();
    const auto polys = plan_polynomials(plan);
    for (std::size_t i = 0; i < hit->primality.size(); ++i) {
      Json v = codec::primality(hit->primality[i]);
      v["polynomial"] = i < plan.h.size() ? "h_" + std::to_string(i + 1)
                                          : "g_" + std::to_string(i + 1 - plan.h.size());
      v["value"] = codec::big(polys[i](hit->t));
      verdicts.push_back(std::move(v));
    }
    j["primality"] = std::move(verdicts);
    Json shifted = Json::array();
    for (std::size_t i = 0; i < hit->shifted.size(); ++i) {
      Json s = codec::factored(hit->shifted[i]);
      s["alpha"] = plan.spec.alphas()[i];
      s["f"] = codec::value(hit->values[i]);
      s["f_decimal"] = to_decimal(hit->values[i], digits);
      shifted.push_back(std::move(s));
    }
    j["shifted"] = std::move(shifted);
    if (hit->ratios) {
      Json ratios = Json::array();
      for (const auto& r : *hit->ratios)
        ratios.push_back({{"exact", codec::value(r)}, {"decimal", to_decimal(r, digits)}});
      j["ratios"] = std::move(ratios);
    }
    j["errors"] = hit->errors;
  } else {
    j["reason"] = outcome.reason;
  }
  const auto& s = outcome.stats;
  j["counters"] = {{"segments", s.segments},
                   {"candidates", s.candidates},
                   {"survivors", s.survivors},
                   {"primality_tests", s.primality_tests},
                   {"full_passes", s.full_passes},
                   {"near_misses", s.near_misses}};
  Json misses = Json::array();
  for (const auto& m : outcome.near_misses)
    misses.push_back({{"t", codec::big(m.t)}, {"errors", m.errors}});
  j["near_misses"] = std::move(misses);
  j["wall_time_s"] = s.seconds;
  return j.dump(2) + "\n";
}

} // namespace mft

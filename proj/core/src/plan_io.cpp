#include "mftuple/plan_io.hpp"

#include "json_codec.hpp"
#include "mftuple/error.hpp"

namespace mft {

using codec::Json;

namespace {

Json poly(const LinearPolynomial& p) {
  Json out = Json::object();
  out["leading"] = codec::big(p.leading);
  out["constant"] = codec::big(p.constant);
  return out;
}

LinearPolynomial poly(const Json& j) {
  return {codec::big(j.at("leading")), codec::big(j.at("constant"))};
}

template <class T>
Json rationals(const std::vector<T>& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(codec::rational(r));
  return out;
}

std::vector<Rational> rationals(const Json& j) {
  std::vector<Rational> out;
  for (const auto& r : j) out.push_back(codec::rational(r));
  return out;
}

} // namespace

std::string plan_to_json(const ConstructionPlan& plan) {
  Json j = Json::object();
  j["version"] = kPlanSchema;
  j["function"] = {{"name", plan.function_name},
                   {"h_power", plan.goal.h_power},
                   {"inverted", plan.inverted}};
  j["goal"] = {{"mode", to_string(plan.goal.mode)},
               {"targets", rationals(plan.goal.targets)},
               {"epsilon", codec::rational(plan.goal.epsilon)}};
  j["alphas"] = plan.spec.alphas();
  j["betas"] = plan.spec.betas();
  j["admissible"] = plan.spec.admissible();
  j["L"] = plan.L;
  j["s"] = plan.s;
  j["small_primes"] = plan.small_primes;
  j["b"] = plan.b;
  j["e"] = plan.e;
  j["x"] = plan.x;
  j["r"] = codec::value(plan.r);
  j["targets"] = rationals(plan.targets);
  j["epsilon"] = codec::rational(plan.epsilon);
  Json iv = Json::array();
  for (const auto& [lo, hi] : plan.intervals)
    iv.push_back(Json::array({codec::rational(lo), codec::rational(hi)}));
  j["intervals"] = std::move(iv);
  Json w = Json::array();
  for (const auto& wi : plan.w) w.push_back(codec::factored(wi));
  j["w"] = std::move(w);
  j["c"] = codec::big(plan.c);
  j["M"] = codec::big(plan.M);
  j["h0"] = poly(plan.h0);
  Json h = Json::array(), g = Json::array();
  for (const auto& p : plan.h) h.push_back(poly(p));
  for (const auto& p : plan.g) g.push_back(poly(p));
  j["h"] = std::move(h);
  j["g"] = std::move(g);
  return j.dump(2) + "\n";
}

ConstructionPlan plan_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("plan is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("version", std::string{}) != kPlanSchema)
      throw InvalidArgument("plan version must be \"" + std::string(kPlanSchema) + "\"");
    ConstructionPlan plan;
    plan.spec = TupleSpec(j.at("alphas").get<Offsets>(), j.at("betas").get<Offsets>());
    const auto& fn = j.at("function");
    plan.function_name = fn.at("name").get<std::string>();
    plan.inverted = fn.at("inverted").get<bool>();
    const MultiplicativeFunction f = builtin(plan.function_name);
    plan.oriented = plan.inverted ? reciprocal(f) : f;
    plan.goal.h_power = fn.at("h_power").get<unsigned>();
    const auto& goal = j.at("goal");
    plan.goal.mode = goal_mode_from_string(goal.at("mode").get<std::string>());
    plan.goal.targets = rationals(goal.at("targets"));
    plan.goal.epsilon = codec::rational(goal.at("epsilon"));
    plan.L = j.at("L").get<std::size_t>();
    plan.s = j.at("s").get<unsigned>();
    plan.small_primes = j.at("small_primes").get<std::vector<std::uint64_t>>();
    plan.b = j.at("b").get<std::vector<std::uint64_t>>();
    plan.e = j.at("e").get<std::vector<std::uint64_t>>();
    plan.x = j.at("x").get<std::vector<std::vector<unsigned>>>();
    plan.r = codec::value(j.at("r"));
    plan.targets = rationals(j.at("targets"));
    plan.epsilon = codec::rational(j.at("epsilon"));
    for (const auto& iv : j.at("intervals"))
      plan.intervals.emplace_back(codec::rational(iv.at(0)), codec::rational(iv.at(1)));
    for (const auto& w : j.at("w")) plan.w.push_back(codec::factored(w));
    plan.c = codec::big(j.at("c"));
    plan.M = codec::big(j.at("M"));
    plan.h0 = poly(j.at("h0"));
    for (const auto& p : j.at("h")) plan.h.push_back(poly(p));
    for (const auto& p : j.at("g")) plan.g.push_back(poly(p));
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed plan: ") + e.what());
  }
}

} // namespace mft

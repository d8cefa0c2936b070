#pragma once

#include <string>

#include "mftuple/construct.hpp"

namespace mft {

inline constexpr const char* kPlanSchema = "plan-v1";

/// plan-v1 JSON: big integers as decimal strings, rationals as [num, den].
std::string plan_to_json(const ConstructionPlan& plan);
/// Inverse of plan_to_json. Does not validate; call validate_plan.
ConstructionPlan plan_from_json(const std::string& text);

} // namespace mft

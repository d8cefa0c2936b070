#pragma once

#include <string>

#include "mftuple/search.hpp"

namespace mft {

inline constexpr const char* kHitSchema = "hit-v1";

/// hit-v1 JSON for a search outcome (hit or exhausted report).
std::string outcome_to_json(const ConstructionPlan& plan, const SearchOutcome& outcome,
                            unsigned digits);

} // namespace mft

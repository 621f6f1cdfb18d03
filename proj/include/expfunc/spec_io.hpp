#pragma once

#include <json.hpp>
#include <string>

#include "expfunc/pii.hpp"

namespace expfunc {

/// Process-specification documents (JSON). See README for the schema.
/// Every parse error is a SpecError naming the offending key.
PiiCharacteristics parse_process_spec(const nlohmann::json& document);
PiiCharacteristics load_process_spec(const std::string& path);

LevyModel parse_levy(const nlohmann::json& levy);
JumpMeasure parse_jumps(const nlohmann::json& jumps);

/// Canonical document ({"process": ...}); parse_process_spec of the result
/// reproduces an identical model. Triplets are written untruncated.
nlohmann::json process_to_json(const PiiCharacteristics& pii);
nlohmann::json levy_to_json(const LevyModel& levy);
nlohmann::json jumps_to_json(const JumpMeasure& jumps);

}  // namespace expfunc

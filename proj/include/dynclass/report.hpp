#pragma once

#include <string>

#include <json.hpp>

#include "dynclass/classify.hpp"

namespace dynclass {

/// Boxed text report mirroring the classification summary layout: class and
/// confidence, invariant sets, quantitative measures, and the landscape
/// interpretation as the final line.
std::string render_report(const ClassificationReport& report);

/// Human-readable fixed point description, e.g. "Stable node".
std::string describe(FixedPointType type);

nlohmann::json to_json(const FixedPointRecord& record);
nlohmann::json to_json(const OrbitRecord& orbit);
nlohmann::json to_json(const ClassificationReport& report);

/// Inverse of to_json(report); used to verify numeric round-tripping.
ClassificationReport report_from_json(const nlohmann::json& j);

} // namespace dynclass

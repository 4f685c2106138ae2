#pragma once

// JSON views of analytics results as served by the API.

#include <string>
#include <vector>

#include <json.hpp>

#include "practice/heatmaps.h"
#include "practice/similarity.h"
#include "practice/theory.h"

namespace practice {

nlohmann::json toJson(const ProgressMatrix& m);
nlohmann::json toJson(const FretboardGrid& g);
nlohmann::json toJson(const ComparisonGrid& g);
nlohmann::json toJson(const Layout2D& layout, const std::vector<std::string>& recordingIds);
nlohmann::json toJson(const ScaleSpec& spec);
nlohmann::json toJson(const RoleSequence& sequence);

}  // namespace practice

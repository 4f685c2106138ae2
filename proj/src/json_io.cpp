#include "practice/json_io.h"

namespace practice {

using nlohmann::json;

json toJson(const ProgressMatrix& m) {
  json cells = json::array();
  for (const auto& c : m.cells) cells.push_back(c ? json(*c) : json(nullptr));
  json columns = json::array();
  for (std::size_t j = 0; j < m.cols; ++j) {
    columns.push_back({{"recording", m.columnRecordings[j]}, {"repetition", m.columnRepetitions[j]}});
  }
  return {{"exercise", m.exercise}, {"rows", m.rows}, {"cols", m.cols}, {"cells", cells}, {"columns", columns}};
}

json toJson(const FretboardGrid& g) {
  return {{"rows", g.strings},
          {"cols", g.cols()},
          {"counts", g.counts},
          {"totalNotes", g.totalNotes},
          {"unmappedNotes", g.unmappedNotes}};
}

json toJson(const ComparisonGrid& g) {
  json cells = json::array();
  for (auto c : g.cells) {
    // 0 neither, 1 onlyA, 2 onlyB, 3 both
    cells.push_back(static_cast<int>(c));
  }
  return {{"rows", g.strings},
          {"cols", g.cols()},
          {"cells", cells},
          {"categories", {"neither", "onlyA", "onlyB", "both"}}};
}

json toJson(const Layout2D& layout, const std::vector<std::string>& recordingIds) {
  json j = json::parse(layoutToJson(layout));
  j["recordings"] = recordingIds;
  j["gridShape"] = {{"rows", layout.shape.rows}, {"cols", layout.shape.cols}};
  return j;
}

json toJson(const ScaleSpec& spec) {
  return {{"name", spec.name},
          {"rootPitchClass", spec.rootPitchClass},
          {"scalePitchClasses", spec.scalePitchClasses},
          {"bluePitchClasses", spec.bluePitchClasses}};
}

json toJson(const RoleSequence& sequence) {
  json spans = json::array();
  for (const auto& s : sequence.spans) {
    spans.push_back({{"startSeconds", s.startSeconds},
                     {"durationSeconds", s.durationSeconds},
                     {"role", std::string(toString(s.role))},
                     {"pitch", s.pitch}});
  }
  auto shares = roleDurationShares(sequence);
  json shareJson = json::object();
  for (auto role : kAllRoles) shareJson[std::string(toString(role))] = share(shares, role);
  return {{"recording", sequence.recordingId}, {"spans", spans}, {"shares", shareJson}};
}

}  // namespace practice

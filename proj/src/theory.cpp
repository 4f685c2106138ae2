#include "practice/theory.h"

#include <json.hpp>

#include "practice/error.h"

namespace practice {

ScaleSpec ScaleSpec::aMinorPentatonicBlues() {
  return ScaleSpec{"A minor pentatonic blues", 9, {9, 0, 2, 4, 7}, {3}};
}

void validate(const ScaleSpec& spec) {
  auto inRange = [](int pc) { return pc >= 0 && pc < 12; };
  if (!inRange(spec.rootPitchClass)) throw ValidationError("root pitch class outside 0..11");
  for (int pc : spec.scalePitchClasses) {
    if (!inRange(pc)) throw ValidationError("scale pitch class outside 0..11");
  }
  for (int pc : spec.bluePitchClasses) {
    if (!inRange(pc)) throw ValidationError("blue pitch class outside 0..11");
    if (spec.scalePitchClasses.count(pc)) throw ValidationError("blue note overlaps the scale");
  }
  if (!spec.scalePitchClasses.count(spec.rootPitchClass)) {
    throw ValidationError("root must belong to the scale");
  }
}

ScaleSpec scaleSpecFromJson(std::string_view text) {
  ScaleSpec spec;
  try {
    auto j = nlohmann::json::parse(text);
    spec.name = j.at("name").get<std::string>();
    spec.rootPitchClass = j.at("rootPitchClass").get<int>();
    for (int pc : j.at("scalePitchClasses")) spec.scalePitchClasses.insert(pc);
    for (int pc : j.at("bluePitchClasses")) spec.bluePitchClasses.insert(pc);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad scale document: ") + e.what());
  }
  validate(spec);
  return spec;
}

std::string scaleSpecToJson(const ScaleSpec& spec) {
  nlohmann::json j = {{"name", spec.name},
                      {"rootPitchClass", spec.rootPitchClass},
                      {"scalePitchClasses", spec.scalePitchClasses},
                      {"bluePitchClasses", spec.bluePitchClasses}};
  return j.dump();
}

std::string_view toString(NoteRole role) {
  switch (role) {
    case NoteRole::Root: return "root";
    case NoteRole::ScaleTone: return "scaleTone";
    case NoteRole::BlueNote: return "blueNote";
    case NoteRole::Outside: return "outside";
  }
  return "outside";
}

std::string_view pitchClassName(int pitchClass) {
  static constexpr std::string_view names[12] = {"C", "C#", "D", "Eb", "E", "F",
                                                 "F#", "G", "Ab", "A", "Bb", "B"};
  return names[((pitchClass % 12) + 12) % 12];
}

NoteRole classifyNote(int pitch, const ScaleSpec& spec) {
  int pc = ((pitch % 12) + 12) % 12;
  if (pc == spec.rootPitchClass) return NoteRole::Root;
  if (spec.bluePitchClasses.count(pc)) return NoteRole::BlueNote;
  if (spec.scalePitchClasses.count(pc)) return NoteRole::ScaleTone;
  return NoteRole::Outside;
}

RoleSequence roleSequence(const Recording& recording, const ScaleSpec& spec) {
  RoleSequence seq{recording.id, {}};
  seq.spans.reserve(recording.notes.size());
  for (const auto& n : recording.notes) {
    seq.spans.push_back({n.onsetSeconds, n.durationSeconds, classifyNote(n.pitch, spec), n.pitch});
  }
  return seq;
}

RoleShares roleDurationShares(const RoleSequence& sequence) {
  RoleShares shares{};
  double total = 0.0;
  for (const auto& s : sequence.spans) {
    shares[static_cast<std::size_t>(s.role)] += s.durationSeconds;
    total += s.durationSeconds;
  }
  if (total <= 0.0) return RoleShares{};
  for (auto& v : shares) v /= total;
  return shares;
}

}  // namespace practice

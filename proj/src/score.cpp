#include "practice/score.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "practice/error.h"
#include "practice/midi.h"

namespace practice {

Tuning::Tuning(std::vector<int> openPitches) : openPitches_(std::move(openPitches)) {
  if (openPitches_.empty()) throw ValidationError("tuning needs at least one string");
  for (std::size_t i = 0; i < openPitches_.size(); ++i) {
    if (openPitches_[i] < 0 || openPitches_[i] > 127) {
      throw ValidationError("open pitch out of MIDI range", {i});
    }
    if (i > 0 && openPitches_[i] >= openPitches_[i - 1]) {
      throw ValidationError("open pitches must strictly decrease from string 1", {i});
    }
  }
}

Tuning Tuning::standardGuitar() { return Tuning({64, 59, 55, 50, 45, 40}); }

int Tuning::openPitch(int string) const {
  if (string < 1 || string > stringCount()) {
    throw ContractViolation("string " + std::to_string(string) + " outside 1.." +
                            std::to_string(stringCount()));
  }
  return openPitches_[static_cast<std::size_t>(string - 1)];
}

int pitchAt(const Tuning& tuning, FretboardCoord coord, int fretCount) {
  if (coord.fret < 0 || coord.fret > fretCount) {
    throw ContractViolation("fret " + std::to_string(coord.fret) + " outside 0.." +
                            std::to_string(fretCount));
  }
  return tuning.openPitch(coord.string) + coord.fret;
}

std::vector<FretboardCoord> coordsForPitch(const Tuning& tuning, int pitch, int fretCount) {
  std::vector<FretboardCoord> out;
  for (int s = 1; s <= tuning.stringCount(); ++s) {
    int fret = pitch - tuning.openPitch(s);
    if (fret >= 0 && fret <= fretCount) out.push_back({s, fret});
  }
  return out;
}

ReferenceScore validateScore(ReferenceScore score, std::size_t voiceLimit) {
  if (score.notes.empty()) throw ValidationError("score has no notes");
  if (!(score.referenceTempoBpm > 0.0) || !std::isfinite(score.referenceTempoBpm)) {
    throw ValidationError("referenceTempoBpm must be positive");
  }
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < score.notes.size(); ++i) {
    const auto& n = score.notes[i];
    bool ok = n.pitch >= 0 && n.pitch <= 127 && n.onsetBeats >= 0.0 &&
              std::isfinite(n.onsetBeats) && n.durationBeats > 0.0 &&
              std::isfinite(n.durationBeats);
    if (i > 0) {
      const auto& p = score.notes[i - 1];
      ok = ok && (p.onsetBeats < n.onsetBeats ||
                  (p.onsetBeats == n.onsetBeats && p.pitch <= n.pitch));
    }
    if (!ok) bad.push_back(i);
  }
  if (!bad.empty()) throw ValidationError("invalid or unsorted score notes", std::move(bad));

  // A note violates the voice limit when it starts while `voiceLimit` earlier
  // notes are still sounding.
  for (std::size_t i = 0; i < score.notes.size(); ++i) {
    std::size_t sounding = 0;
    for (std::size_t j = 0; j < i; ++j) {
      const auto& p = score.notes[j];
      if (p.onsetBeats + p.durationBeats > score.notes[i].onsetBeats) ++sounding;
    }
    if (sounding >= voiceLimit) bad.push_back(i);
  }
  if (!bad.empty()) {
    throw ValidationError("polyphony exceeds voice limit " + std::to_string(voiceLimit),
                          std::move(bad));
  }
  for (std::size_t i = 0; i < score.notes.size(); ++i) score.notes[i].index = i;
  return score;
}

ReferenceScore scoreFromJson(std::string_view text, std::size_t voiceLimit) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("score is neither SMF nor JSON: ") + e.what());
  }
  ReferenceScore score;
  try {
    score.exercise = j.at("exercise").get<std::string>();
    score.referenceTempoBpm = j.at("referenceTempoBpm").get<double>();
    for (const auto& n : j.at("notes")) {
      score.notes.push_back({score.notes.size(), n.at("pitch").get<int>(),
                             n.at("onsetBeats").get<double>(), n.at("durationBeats").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad score document: ") + e.what());
  }
  if (score.exercise.empty()) throw ValidationError("score exercise name is empty");
  return validateScore(std::move(score), voiceLimit);
}

ReferenceScore scoreFromSmf(std::span<const std::uint8_t> bytes, const ScoreLoadOptions& options) {
  SmfContents smf = parseSmf(bytes);
  auto notes = pairNotes(smf);
  ReferenceScore score;
  score.exercise = options.exercise;
  score.referenceTempoBpm = 60e6 / smf.tempo.entries().front().microsecondsPerQuarter;
  const double ppq = smf.tempo.ppq();
  for (const auto& n : notes) {
    score.notes.push_back({score.notes.size(), n.pitch, static_cast<double>(n.onsetTick) / ppq,
                           static_cast<double>(n.durationTicks) / ppq});
  }
  if (score.exercise.empty()) throw ValidationError("SMF score needs an exercise name");
  return validateScore(std::move(score), options.voiceLimit);
}

ReferenceScore loadScore(std::span<const std::uint8_t> bytes, const ScoreLoadOptions& options) {
  if (bytes.size() >= 4 && std::equal(bytes.begin(), bytes.begin() + 4, "MThd")) {
    return scoreFromSmf(bytes, options);
  }
  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos || text[first] != '{') {
    throw FormatError("score is neither SMF nor JSON");
  }
  return scoreFromJson(text, options.voiceLimit);
}

ReferenceScore loadScoreFile(const std::filesystem::path& path, ScoreLoadOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open score file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (options.exercise.empty()) options.exercise = path.stem().string();
  return loadScore(bytes, options);
}

std::string scoreToJson(const ReferenceScore& score) {
  nlohmann::json notes = nlohmann::json::array();
  for (const auto& n : score.notes) {
    notes.push_back({{"pitch", n.pitch}, {"onsetBeats", n.onsetBeats}, {"durationBeats", n.durationBeats}});
  }
  nlohmann::json j = {{"exercise", score.exercise},
                      {"referenceTempoBpm", score.referenceTempoBpm},
                      {"notes", std::move(notes)}};
  return j.dump(2);
}

}  // namespace practice

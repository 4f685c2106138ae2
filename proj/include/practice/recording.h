#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "practice/midi.h"
#include "practice/timestamp.h"

namespace practice {

enum class ExerciseKind { ScalePattern, Riff, Improvisation };

std::string_view toString(ExerciseKind kind);
/// Accepts the JSON names (scalePattern, riff, improvisation) and the CLI
/// short forms (scale, riff, improv).
std::optional<ExerciseKind> parseExerciseKind(std::string_view text);

struct RecordingMeta {
  std::string player;
  std::string exercise;
  Timestamp recordedAt{};
  ExerciseKind exerciseKind = ExerciseKind::ScalePattern;

  friend bool operator==(const RecordingMeta&, const RecordingMeta&) = default;
};

struct Recording {
  std::string id;
  std::vector<NoteEvent> notes;  // sorted by (onsetSeconds, pitch)
  RecordingMeta meta;
};

}  // namespace practice

#include "practice/recording.h"

namespace practice {

std::string_view toString(ExerciseKind kind) {
  switch (kind) {
    case ExerciseKind::ScalePattern: return "scalePattern";
    case ExerciseKind::Riff: return "riff";
    case ExerciseKind::Improvisation: return "improvisation";
  }
  return "scalePattern";
}

std::optional<ExerciseKind> parseExerciseKind(std::string_view text) {
  if (text == "scalePattern" || text == "scale") return ExerciseKind::ScalePattern;
  if (text == "riff") return ExerciseKind::Riff;
  if (text == "improvisation" || text == "improv") return ExerciseKind::Improvisation;
  return std::nullopt;
}

}  // namespace practice

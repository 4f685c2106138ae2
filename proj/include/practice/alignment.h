#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "practice/recording.h"
#include "practice/score.h"
#include "practice/timestamp.h"

namespace practice {

/// One pass through an exercise inside a longer recording.
struct Segment {
  std::string recordingId;
  Timestamp recordedAt{};
  std::size_t repetitionIndex = 0;
  std::size_t firstNoteIndex = 0;  // into the recording's note list
  std::vector<NoteEvent> notes;
  double startSeconds = 0.0;
  double matchRate = 0.0;
};

struct MatchedNote {
  std::size_t index = 0;  // position in the aligned note list
  NoteEvent note;
};

struct AlignedPair {
  std::size_t refIndex = 0;
  std::optional<MatchedNote> recorded;  // absent: the reference note was missed
};

struct Alignment {
  std::vector<AlignedPair> pairs;  // one per reference note, in order
  std::vector<MatchedNote> insertions;
  double cost = 0.0;
  // Onset of the first aligned recorded note; anchors the nominal time map.
  double segmentStartSeconds = 0.0;

  std::size_t matchedCount() const;
};

inline constexpr double kMinimumMatchRate = 0.5;

/// Global edit-distance alignment over pitch sequences. Match 0, substitution
/// (reported as miss plus insertion) 1, deletion 1, insertion 1. Traceback
/// prefers diagonal over deletion over insertion.
Alignment alignNotes(const std::vector<NoteEvent>& segmentNotes, const ReferenceScore& score);

/// Greedy semi-global segmentation of a recording into repetitions.
std::vector<Segment> segmentRepetitions(const Recording& recording, const ReferenceScore& score);

enum class FitMode { None, Offset, Affine };

std::string_view toString(FitMode mode);
std::optional<FitMode> parseFitMode(std::string_view text);

struct TimeMap {
  FitMode mode = FitMode::None;
  double secondsPerBeat = 0.5;
  double offsetSeconds = 0.0;

  double predict(double beats) const noexcept { return secondsPerBeat * beats + offsetSeconds; }
};

/// Fits beats -> seconds over matched pairs. Affine with fewer than two
/// distinct matched beats degrades to offset; offset with no match to none.
TimeMap fitTimeMap(const Alignment& alignment, const ReferenceScore& score,
                   FitMode mode = FitMode::Affine);

struct NoteDeviation {
  std::size_t refIndex = 0;
  std::optional<double> deviationSeconds;  // negative = early
};

std::vector<NoteDeviation> computeDeviations(const Alignment& alignment, const TimeMap& timeMap,
                                             const ReferenceScore& score);

}  // namespace practice

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace practice {

inline constexpr int kDefaultFretCount = 22;

struct FretboardCoord {
  int string = 1;  // 1 = highest pitched string
  int fret = 0;

  friend bool operator==(const FretboardCoord&, const FretboardCoord&) = default;
};

/// Open-string pitches ordered from string 1 (highest) to string S (lowest).
class Tuning {
 public:
  /// Throws ValidationError unless nonempty and strictly decreasing.
  explicit Tuning(std::vector<int> openPitches);

  static Tuning standardGuitar();

  int stringCount() const noexcept { return static_cast<int>(openPitches_.size()); }
  int openPitch(int string) const;  // 1-based
  const std::vector<int>& openPitches() const noexcept { return openPitches_; }

  friend bool operator==(const Tuning&, const Tuning&) = default;

 private:
  std::vector<int> openPitches_;
};

/// Pitch sounding at a coordinate. Throws ContractViolation when out of bounds.
int pitchAt(const Tuning& tuning, FretboardCoord coord, int fretCount = kDefaultFretCount);

/// All coordinates that sound `pitch`, ordered by string ascending.
std::vector<FretboardCoord> coordsForPitch(const Tuning& tuning, int pitch,
                                           int fretCount = kDefaultFretCount);

struct ReferenceNote {
  std::size_t index = 0;
  int pitch = 0;
  double onsetBeats = 0.0;
  double durationBeats = 1.0;

  friend bool operator==(const ReferenceNote&, const ReferenceNote&) = default;
};

struct ReferenceScore {
  std::string exercise;
  std::vector<ReferenceNote> notes;
  double referenceTempoBpm = 120.0;

  double secondsPerBeat() const noexcept { return 60.0 / referenceTempoBpm; }
  std::size_t size() const noexcept { return notes.size(); }

  friend bool operator==(const ReferenceScore&, const ReferenceScore&) = default;
};

struct ScoreLoadOptions {
  // Maximum number of simultaneously sounding notes.
  std::size_t voiceLimit = 1;
  // Exercise name for SMF input, which carries none of its own.
  std::string exercise;
};

/// Checks every ReferenceScore invariant and renumbers indices. Throws
/// ValidationError listing offending note indices where applicable.
ReferenceScore validateScore(ReferenceScore score, std::size_t voiceLimit = 1);

/// Detects SMF ("MThd" prefix) or JSON input and loads accordingly.
ReferenceScore loadScore(std::span<const std::uint8_t> bytes, const ScoreLoadOptions& options = {});
/// Same, reading from disk. For SMF input the file stem names the exercise
/// unless `options.exercise` is set.
ReferenceScore loadScoreFile(const std::filesystem::path& path, ScoreLoadOptions options = {});

ReferenceScore scoreFromJson(std::string_view text, std::size_t voiceLimit = 1);
ReferenceScore scoreFromSmf(std::span<const std::uint8_t> bytes, const ScoreLoadOptions& options);
std::string scoreToJson(const ReferenceScore& score);

}  // namespace practice

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "practice/catalog.h"
#include "practice/recording.h"
#include "practice/score.h"
#include "practice/theory.h"
#include "practice/viz.h"

namespace practice {

/// Rectangle of the fretboard a player favours when improvising.
struct FretRegion {
  int firstString = 1, lastString = 6;
  int firstFret = 5, lastFret = 8;
  double weight = 1.0;
};

struct ProblemNote {
  std::size_t index = 0;  // reference note index, must have a neighbour on each side
  double offsetSeconds = 0.0;
};

struct PlayerSpec {
  std::string name;
  double jitterStdDevSeconds = 0.0;
  // Jitter amplitude multiplier per repetition (1 = no change). Below 1 the
  // player keeps one timing pattern that shrinks instead of fresh noise.
  double improvementPerRepetition = 1.0;
  // Performed tempo relative to the reference tempo.
  double tempoFactor = 1.0;
  std::optional<ProblemNote> problemNote;
  std::vector<FretRegion> styleBias;
  // One blue note of this length is inserted into the first improvisation.
  double longBlueNoteSeconds = 0.0;
  // Overrides the exercise's session count when set.
  std::optional<int> sessions;
};

struct ExerciseSpec {
  std::string name;
  ExerciseKind kind = ExerciseKind::ScalePattern;
  std::optional<ReferenceScore> score;  // required unless improvisation
  std::optional<ScaleSpec> scale;
  int repetitionsPerSession = 1;
  int sessions = 1;
  int notesPerRecording = 32;        // improvisation only
  std::vector<std::string> players;  // empty = every player
};

struct GeneratorSpec {
  std::uint64_t seed = 1;
  Timestamp start{};
  int sessionIntervalDays = 7;
  std::vector<PlayerSpec> players;
  std::vector<ExerciseSpec> exercises;
};

/// File PPQ of generated recordings. Divisible by 4 * 11 * 100 so 1.1x tempo
/// renditions of quarter-beat positions land on whole ticks.
inline constexpr int kGeneratorPpq = 4400;

GeneratorSpec generatorSpecFromJson(std::string_view text);
std::string generatorSpecToJson(const GeneratorSpec& spec);

/// Bundled demo population: an improving student with a problem note, a
/// low-string player, a seeded outlier and a long blue note.
GeneratorSpec demoGeneratorSpec();

/// Writes a complete catalog to `outDir` (must be absent or empty), plus a
/// `<recording>.truth.json` oracle next to every recording. Throws
/// std::runtime_error when `outDir` is not empty.
void generateCatalog(const GeneratorSpec& spec, const std::filesystem::path& outDir);

/// Ground truth of a generated scale or riff recording.
struct RepetitionTruth {
  std::size_t repetition = 0;
  std::vector<double> jitterSeconds;  // per reference note
};

struct RecordingTruth {
  std::string player;
  std::string exercise;
  double secondsPerBeat = 0.0;
  std::vector<RepetitionTruth> repetitions;
  std::optional<double> longBlueNoteOnsetSeconds;
};

RecordingTruth readTruth(const std::filesystem::path& truthFile);
std::filesystem::path truthPathFor(const Catalog& catalog, const std::string& recordingId);

/// Queries behind the four demo figures.
struct DemoQueries {
  VizQuery progress;
  VizQuery compare;
  VizQuery similarity;
  VizQuery roles;
};

DemoQueries demoQueries();

/// Renders the four demo figures as progress.svg, compare.svg,
/// similarity.svg and roles.svg. Returns the written paths in that order.
std::vector<std::filesystem::path> writeDemoFigures(const Catalog& catalog,
                                                    const std::filesystem::path& outDir);

}  // namespace practice

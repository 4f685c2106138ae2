#include <gtest/gtest.h>

#include <json.hpp>

#include "practice/error.h"
#include "practice/score.h"
#include "practice/smf_writer.h"

using namespace practice;

namespace {

std::vector<std::uint8_t> bytesOf(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(PitchAt, StandardTuningExamples) {
  const auto t = Tuning::standardGuitar();
  EXPECT_EQ(pitchAt(t, {6, 0}), 40);
  EXPECT_EQ(pitchAt(t, {6, 5}), 45);
  EXPECT_EQ(pitchAt(t, {2, 5}), 64);
}

TEST(PitchAt, OutOfBoundsIsContractViolation) {
  const auto t = Tuning::standardGuitar();
  EXPECT_THROW(pitchAt(t, {0, 0}), ContractViolation);
  EXPECT_THROW(pitchAt(t, {7, 0}), ContractViolation);
  EXPECT_THROW(pitchAt(t, {1, -1}), ContractViolation);
  EXPECT_THROW(pitchAt(t, {1, 23}), ContractViolation);
  EXPECT_NO_THROW(pitchAt(t, {1, 24}, 24));
}

TEST(CoordsForPitch, Examples) {
  const auto t = Tuning::standardGuitar();
  std::vector<FretboardCoord> e64 = {{1, 0}, {2, 5}, {3, 9}, {4, 14}, {5, 19}};
  EXPECT_EQ(coordsForPitch(t, 64, 22), e64);
  EXPECT_TRUE(coordsForPitch(t, 39, 22).empty());
  EXPECT_EQ(coordsForPitch(t, 40, 22), (std::vector<FretboardCoord>{{6, 0}}));
}

TEST(CoordsForPitch, ConsistentAndExhaustiveOverGrid) {
  const auto t = Tuning::standardGuitar();
  for (int fretCount : {12, 22, 24}) {
    for (int p = 0; p < 128; ++p) {
      std::vector<FretboardCoord> brute;
      for (int s = 1; s <= 6; ++s) {
        for (int f = 0; f <= fretCount; ++f) {
          if (pitchAt(t, {s, f}, fretCount) == p) brute.push_back({s, f});
        }
      }
      EXPECT_EQ(coordsForPitch(t, p, fretCount), brute) << p;
    }
  }
}

TEST(Tuning, RejectsNonDecreasingOrEmpty) {
  EXPECT_THROW(Tuning({}), ValidationError);
  EXPECT_THROW(Tuning({40, 45}), ValidationError);
  EXPECT_THROW(Tuning({50, 50}), ValidationError);
  EXPECT_NO_THROW(Tuning({43, 38, 33, 28}));
}

TEST(LoadScore, JsonTwoNotes) {
  auto s = loadScore(bytesOf(R"({"exercise":"a","referenceTempoBpm":90,"notes":[
      {"pitch":57,"onsetBeats":0,"durationBeats":1},{"pitch":60,"onsetBeats":1,"durationBeats":1}]})"));
  ASSERT_EQ(s.notes.size(), 2u);
  EXPECT_EQ(s.notes[0].index, 0u);
  EXPECT_EQ(s.notes[1].index, 1u);
  EXPECT_EQ(s.notes[1].pitch, 60);
  EXPECT_EQ(s.exercise, "a");
  EXPECT_DOUBLE_EQ(s.secondsPerBeat(), 60.0 / 90.0);
}

TEST(LoadScore, SmfBeatsFromTicks) {
  auto bytes = smf::writeSmf({{0, 480, 57, 90, 0}, {480, 720, 60, 90, 0}}, {{0, 600000}}, {1, 480, true, false});
  ScoreLoadOptions opts;
  opts.exercise = "riff";
  auto s = loadScore(bytes, opts);
  ASSERT_EQ(s.notes.size(), 2u);
  EXPECT_EQ(s.notes[0].durationBeats, 1.0);
  EXPECT_EQ(s.notes[1].onsetBeats, 1.0);
  EXPECT_EQ(s.notes[1].durationBeats, 0.5);
  EXPECT_DOUBLE_EQ(s.referenceTempoBpm, 100.0);
  EXPECT_EQ(s.exercise, "riff");
}

TEST(LoadScore, EmptyNotesIsValidationError) {
  EXPECT_THROW(loadScore(bytesOf(R"({"exercise":"a","referenceTempoBpm":90,"notes":[]})")), ValidationError);
}

TEST(LoadScore, UnknownTypeIsFormatError) {
  EXPECT_THROW(loadScore(bytesOf("RIFF....WAVE")), FormatError);
}

TEST(LoadScore, UnsortedNotesRejectedWithIndices) {
  try {
    loadScore(bytesOf(R"({"exercise":"a","referenceTempoBpm":90,"notes":[
      {"pitch":57,"onsetBeats":2,"durationBeats":1},{"pitch":60,"onsetBeats":1,"durationBeats":1}]})"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.indices(), std::vector<std::size_t>{1});
  }
}

TEST(LoadScore, VoiceLimitListsOffendingIndices) {
  const std::string chord = R"({"exercise":"a","referenceTempoBpm":90,"notes":[
      {"pitch":57,"onsetBeats":0,"durationBeats":2},{"pitch":60,"onsetBeats":0,"durationBeats":1},
      {"pitch":64,"onsetBeats":1,"durationBeats":1},{"pitch":65,"onsetBeats":3,"durationBeats":1}]})";
  try {
    loadScore(bytesOf(chord));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.indices(), (std::vector<std::size_t>{1, 2}));
  }
  ScoreLoadOptions two;
  two.voiceLimit = 2;
  EXPECT_EQ(loadScore(bytesOf(chord), two).notes.size(), 4u);
}

TEST(LoadScore, JsonRoundTripIsIdempotent) {
  auto s = loadScore(bytesOf(R"({"exercise":"a b","referenceTempoBpm":97.5,"notes":[
      {"pitch":57,"onsetBeats":0,"durationBeats":0.333},{"pitch":60,"onsetBeats":0.5,"durationBeats":1.25}]})"));
  auto again = scoreFromJson(scoreToJson(s));
  EXPECT_EQ(scoreToJson(again), scoreToJson(s));
  ASSERT_EQ(again.notes.size(), s.notes.size());
  for (std::size_t i = 0; i < s.notes.size(); ++i) {
    EXPECT_EQ(again.notes[i].onsetBeats, s.notes[i].onsetBeats);
    EXPECT_EQ(again.notes[i].durationBeats, s.notes[i].durationBeats);
  }
  EXPECT_EQ(again.referenceTempoBpm, s.referenceTempoBpm);
}

TEST(LoadScore, JsonFieldNamesExact) {
  auto j = nlohmann::json::parse(scoreToJson(scoreFromJson(
      R"({"exercise":"x","referenceTempoBpm":120,"notes":[{"pitch":60,"onsetBeats":0,"durationBeats":1}]})")));
  EXPECT_TRUE(j.contains("exercise"));
  EXPECT_TRUE(j.contains("referenceTempoBpm"));
  EXPECT_TRUE(j["notes"][0].contains("onsetBeats"));
  EXPECT_TRUE(j["notes"][0].contains("durationBeats"));
}

#include <gtest/gtest.h>

#include "oracles.h"
#include "practice/alignment.h"
#include "practice/prng.h"
#include "support.h"

using namespace practice;
using testsupport::note;
using testsupport::quarterNoteScore;

namespace {

std::vector<NoteEvent> notesFor(const std::vector<int>& pitches, double spacing = 0.5) {
  std::vector<NoteEvent> out;
  for (std::size_t i = 0; i < pitches.size(); ++i) out.push_back(note(pitches[i], static_cast<double>(i) * spacing));
  return out;
}

std::vector<int> randomPitches(Xoshiro256& rng, std::size_t maxLen, int alphabet) {
  std::vector<int> p(rng.below(maxLen + 1));
  for (auto& v : p) v = 60 + static_cast<int>(rng.below(static_cast<std::uint64_t>(alphabet)));
  return p;
}

double rss(const Alignment& a, const TimeMap& m, const ReferenceScore& s) {
  double sum = 0.0;
  for (const auto& d : computeDeviations(a, m, s)) {
    if (d.deviationSeconds) sum += *d.deviationSeconds * *d.deviationSeconds;
  }
  return sum;
}

Alignment shifted(Alignment a, double c) {
  a.segmentStartSeconds += c;
  for (auto& p : a.pairs) {
    if (p.recorded) p.recorded->note.onsetSeconds += c;
  }
  return a;
}

}  // namespace

TEST(AlignNotes, Identity) {
  auto s = quarterNoteScore({60, 62, 64});
  auto a = alignNotes(notesFor({60, 62, 64}), s);
  EXPECT_EQ(a.cost, 0.0);
  EXPECT_EQ(a.matchedCount(), 3u);
  EXPECT_TRUE(a.insertions.empty());
}

TEST(AlignNotes, MissedMiddleNote) {
  auto a = alignNotes(notesFor({60, 64}), quarterNoteScore({60, 62, 64}));
  EXPECT_EQ(a.cost, 1.0);
  EXPECT_FALSE(a.pairs[1].recorded);
  EXPECT_EQ(a.pairs[2].recorded->index, 1u);
  EXPECT_EQ(oracle::bruteForceAlignmentCost({60, 62, 64}, {60, 64}), 1);
}

TEST(AlignNotes, OneInsertion) {
  auto a = alignNotes(notesFor({60, 61, 62, 64}), quarterNoteScore({60, 62, 64}));
  EXPECT_EQ(a.cost, 1.0);
  ASSERT_EQ(a.insertions.size(), 1u);
  EXPECT_EQ(a.insertions[0].note.pitch, 61);
  EXPECT_EQ(oracle::bruteForceAlignmentCost({60, 62, 64}, {60, 61, 62, 64}), 1);
}

TEST(AlignNotes, SubstitutionIsMissPlusInsertion) {
  auto a = alignNotes(notesFor({60, 63, 64}), quarterNoteScore({60, 62, 64}));
  EXPECT_EQ(a.cost, 1.0);
  EXPECT_FALSE(a.pairs[1].recorded);
  ASSERT_EQ(a.insertions.size(), 1u);
  EXPECT_EQ(a.insertions[0].note.pitch, 63);
}

TEST(AlignNotes, EmptyInputs) {
  auto s = quarterNoteScore({60, 62});
  auto a = alignNotes({}, s);
  EXPECT_EQ(a.cost, 2.0);
  EXPECT_EQ(a.matchedCount(), 0u);
}

TEST(AlignNotes, TieBreakPrefersDiagonalThenDeletion) {
  // ref [60, 60], recorded [60]: matching either ref note costs 1. The
  // traceback walks from the end and takes the diagonal first, so the
  // recorded note pairs with ref index 1.
  auto a = alignNotes(notesFor({60}), quarterNoteScore({60, 60}));
  EXPECT_EQ(a.cost, 1.0);
  EXPECT_FALSE(a.pairs[0].recorded);
  EXPECT_TRUE(a.pairs[1].recorded);
}

TEST(AlignNotes, MatchesExhaustiveOracleOnRandomPairs) {
  Xoshiro256 rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    auto ref = randomPitches(rng, 7, 3);
    auto rec = randomPitches(rng, 7, 3);
    if (ref.empty()) ref.push_back(60);
    EXPECT_EQ(alignNotes(notesFor(rec), quarterNoteScore(ref)).cost, oracle::bruteForceAlignmentCost(ref, rec));
  }
}

TEST(AlignNotes, StructuralInvariants) {
  Xoshiro256 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    auto ref = randomPitches(rng, 10, 4);
    if (ref.empty()) ref.push_back(61);
    auto rec = randomPitches(rng, 12, 4);
    auto a = alignNotes(notesFor(rec), quarterNoteScore(ref));
    ASSERT_EQ(a.pairs.size(), ref.size());
    std::optional<std::size_t> last;
    std::vector<int> used(rec.size(), 0);
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
      EXPECT_EQ(a.pairs[i].refIndex, i);
      if (!a.pairs[i].recorded) continue;
      auto idx = a.pairs[i].recorded->index;
      EXPECT_EQ(rec[idx], ref[i]);
      if (last) { EXPECT_GT(idx, *last); }
      last = idx;
      ++used[idx];
    }
    for (const auto& ins : a.insertions) ++used[ins.index];
    for (int u : used) EXPECT_EQ(u, 1);  // every recorded note accounted for once
  }
}

TEST(AlignNotes, CostSymmetric) {
  Xoshiro256 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    auto x = randomPitches(rng, 9, 4);
    auto y = randomPitches(rng, 9, 4);
    if (x.empty()) x.push_back(60);
    if (y.empty()) y.push_back(62);
    EXPECT_EQ(alignNotes(notesFor(x), quarterNoteScore(y)).cost, alignNotes(notesFor(y), quarterNoteScore(x)).cost);
  }
}

TEST(Segment, TwoBackToBackCopies) {
  auto s = quarterNoteScore({57, 60, 62, 64, 67, 69});
  auto segs = segmentRepetitions(testsupport::performScore(s, 2), s);
  ASSERT_EQ(segs.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(segs[k].matchRate, 1.0);
    EXPECT_EQ(segs[k].repetitionIndex, k);
    EXPECT_EQ(segs[k].notes.size(), 6u);
  }
  EXPECT_LT(segs[0].startSeconds, segs[1].startSeconds);
}

TEST(Segment, SingleCopyCoversAllNotes) {
  auto s = quarterNoteScore({57, 60, 62, 64});
  auto rec = testsupport::performScore(s, 1);
  auto segs = segmentRepetitions(rec, s);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].notes.size(), rec.notes.size());
}

TEST(Segment, TrailingStraysExcluded) {
  auto s = quarterNoteScore({57, 60, 62, 64, 67, 69});
  auto rec = testsupport::performScore(s, 1);
  rec.notes.push_back(note(30, 10.0));
  rec.notes.push_back(note(31, 10.5));
  // No 2-note suffix can match 3 of 6 reference notes.
  for (std::size_t i = 0; i + 2 <= rec.notes.size(); ++i) {
    std::vector<NoteEvent> suffix(rec.notes.begin() + static_cast<std::ptrdiff_t>(i),
                                  rec.notes.begin() + static_cast<std::ptrdiff_t>(i + 2));
    EXPECT_LT(alignNotes(suffix, s).matchedCount(), 3u);
  }
  auto segs = segmentRepetitions(rec, s);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].notes.size(), 6u);
}

TEST(Segment, EmptyRecording) {
  Recording r;
  EXPECT_TRUE(segmentRepetitions(r, quarterNoteScore({60})).empty());
}

TEST(Segment, KExactCopiesGiveKFullSegments) {
  auto s = quarterNoteScore({45, 48, 50, 52, 55, 57, 60});
  for (int k = 1; k <= 5; ++k) {
    auto segs = segmentRepetitions(testsupport::performScore(s, k), s);
    ASSERT_EQ(segs.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < segs.size(); ++i) {
      EXPECT_EQ(segs[i].matchRate, 1.0);
      EXPECT_EQ(segs[i].repetitionIndex, i);
      EXPECT_EQ(segs[i].firstNoteIndex, i * s.notes.size());
    }
  }
}

TEST(Segment, DisjointOrderedSlices) {
  Xoshiro256 rng(31);
  auto s = quarterNoteScore({57, 60, 62, 64, 67});
  for (int trial = 0; trial < 100; ++trial) {
    auto rec = testsupport::performScore(s, 3);
    // random drops and stray insertions
    std::vector<NoteEvent> noisy;
    for (const auto& n : rec.notes) {
      if (rng.uniform() < 0.15) continue;
      noisy.push_back(n);
      if (rng.uniform() < 0.15) noisy.push_back(note(40 + static_cast<int>(rng.below(5)), n.onsetSeconds + 0.01));
    }
    rec.notes = noisy;
    auto segs = segmentRepetitions(rec, s);
    std::size_t next = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      EXPECT_EQ(segs[i].repetitionIndex, i);
      EXPECT_GE(segs[i].firstNoteIndex, next);
      EXPECT_GE(segs[i].matchRate, kMinimumMatchRate);
      next = segs[i].firstNoteIndex + segs[i].notes.size();
      if (i > 0) { EXPECT_GT(segs[i].startSeconds, segs[i - 1].startSeconds); }
    }
    EXPECT_LE(next, rec.notes.size());
  }
}

TEST(FitTimeMap, ExactAffineData) {
  auto s = quarterNoteScore({57, 60, 62, 64, 67});
  std::vector<NoteEvent> rec;
  for (std::size_t i = 0; i < 5; ++i) rec.push_back(note(s.notes[i].pitch, 1.25 + 0.4375 * static_cast<double>(i)));
  auto a = alignNotes(rec, s);
  auto m = fitTimeMap(a, s, FitMode::Affine);
  EXPECT_EQ(m.mode, FitMode::Affine);
  EXPECT_NEAR(m.secondsPerBeat, 0.4375, 1e-12);
  EXPECT_NEAR(m.offsetSeconds, 1.25, 1e-12);
  for (const auto& d : computeDeviations(a, m, s)) EXPECT_NEAR(*d.deviationSeconds, 0.0, 1e-12);
}

TEST(FitTimeMap, OffsetAbsorbsUniformShift) {
  auto s = quarterNoteScore({57, 60, 62, 64});
  std::vector<NoteEvent> rec;
  for (std::size_t i = 0; i < 4; ++i) rec.push_back(note(s.notes[i].pitch, 0.02 + 0.5 * static_cast<double>(i)));
  auto a = alignNotes(rec, s);
  auto m = fitTimeMap(a, s, FitMode::Offset);
  EXPECT_EQ(m.mode, FitMode::Offset);
  EXPECT_NEAR(m.offsetSeconds, 0.02, 1e-12);
  EXPECT_EQ(m.secondsPerBeat, 0.5);
  for (const auto& d : computeDeviations(a, m, s)) EXPECT_NEAR(*d.deviationSeconds, 0.0, 1e-12);
}

TEST(FitTimeMap, NoneIsNominalAnchoredAtSegmentStart) {
  auto s = quarterNoteScore({57, 60}, 100.0);
  auto a = alignNotes({note(57, 3.0), note(60, 3.7)}, s);
  auto m = fitTimeMap(a, s, FitMode::None);
  EXPECT_EQ(m.mode, FitMode::None);
  EXPECT_EQ(m.secondsPerBeat, 0.6);
  EXPECT_EQ(m.offsetSeconds, 3.0);
}

TEST(FitTimeMap, DegradationLadder) {
  auto s = quarterNoteScore({57, 60, 62});
  auto one = alignNotes({note(60, 2.0)}, s);
  auto m = fitTimeMap(one, s, FitMode::Affine);
  EXPECT_EQ(m.mode, FitMode::Offset);
  EXPECT_DOUBLE_EQ(m.offsetSeconds, 1.5);
  auto none = alignNotes({note(40, 2.0)}, s);
  EXPECT_EQ(fitTimeMap(none, s, FitMode::Affine).mode, FitMode::None);
  EXPECT_EQ(fitTimeMap(none, s, FitMode::Offset).mode, FitMode::None);
}

TEST(Deviations, PerfectPerformanceAllModes) {
  auto s = quarterNoteScore({57, 60, 62, 64});
  auto rec = testsupport::performScore(s, 1, 0.75);
  auto a = alignNotes(rec.notes, s);
  for (auto mode : {FitMode::None, FitMode::Offset, FitMode::Affine}) {
    for (const auto& d : computeDeviations(a, fitTimeMap(a, s, mode), s)) EXPECT_NEAR(*d.deviationSeconds, 0.0, 1e-12);
  }
}

TEST(Deviations, OneLateNoteModeNone) {
  auto s = quarterNoteScore({57, 60, 62, 64});
  auto rec = testsupport::performScore(s, 1);
  rec.notes[2].onsetSeconds += 0.05;
  auto a = alignNotes(rec.notes, s);
  auto dev = computeDeviations(a, fitTimeMap(a, s, FitMode::None), s);
  ASSERT_EQ(dev.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(*dev[i].deviationSeconds, i == 2 ? 0.05 : 0.0, 1e-12);
}

TEST(Deviations, MissedNoteHasNoDeviation) {
  auto s = quarterNoteScore({57, 60, 62});
  auto a = alignNotes({note(57, 0.0), note(62, 1.0)}, s);
  auto dev = computeDeviations(a, fitTimeMap(a, s), s);
  ASSERT_EQ(dev.size(), 3u);
  EXPECT_FALSE(dev[1].deviationSeconds);
  EXPECT_TRUE(dev[2].deviationSeconds);
}

TEST(FitTimeMap, ResidualOrderingAffineOffsetNone) {
  Xoshiro256 rng(17);
  auto s = quarterNoteScore({45, 48, 50, 52, 55, 57, 60, 62});
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<NoteEvent> rec;
    const double spb = 0.3 + 0.4 * rng.uniform();
    const double start = 5.0 * rng.uniform();
    for (const auto& n : s.notes) {
      if (rng.uniform() < 0.2) continue;
      rec.push_back(note(n.pitch, start + n.onsetBeats * spb + 0.05 * rng.gaussian()));
    }
    std::sort(rec.begin(), rec.end(), [](const auto& x, const auto& y) { return x.onsetSeconds < y.onsetSeconds; });
    auto a = alignNotes(rec, s);
    const double eps = 1e-12;
    EXPECT_LE(rss(a, fitTimeMap(a, s, FitMode::Affine), s), rss(a, fitTimeMap(a, s, FitMode::Offset), s) + eps);
    EXPECT_LE(rss(a, fitTimeMap(a, s, FitMode::Offset), s), rss(a, fitTimeMap(a, s, FitMode::None), s) + eps);
  }
}

TEST(Deviations, ShiftEquivariance) {
  // Offset and affine maps are refitted on the shifted onsets; the nominal map
  // stays anchored where segmentation put the segment.
  Xoshiro256 rng(23);
  auto s = quarterNoteScore({45, 48, 50, 52, 55, 57});
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<NoteEvent> rec;
    for (const auto& n : s.notes) rec.push_back(note(n.pitch, 1.0 + n.onsetBeats * 0.5 + 0.03 * rng.gaussian()));
    std::sort(rec.begin(), rec.end(), [](const auto& x, const auto& y) { return x.onsetSeconds < y.onsetSeconds; });
    auto a = alignNotes(rec, s);
    const double c = 4.0 * rng.uniform() - 2.0;
    auto b = shifted(a, c);
    for (auto mode : {FitMode::Offset, FitMode::Affine}) {
      auto d0 = computeDeviations(a, fitTimeMap(a, s, mode), s);
      auto d1 = computeDeviations(b, fitTimeMap(b, s, mode), s);
      for (std::size_t i = 0; i < d0.size(); ++i) {
        if (d0[i].deviationSeconds) { EXPECT_NEAR(*d1[i].deviationSeconds, *d0[i].deviationSeconds, 1e-9); }
      }
    }
    const auto nominal = fitTimeMap(a, s, FitMode::None);
    auto d0 = computeDeviations(a, nominal, s);
    auto d1 = computeDeviations(b, nominal, s);
    for (std::size_t i = 0; i < d0.size(); ++i) {
      if (d0[i].deviationSeconds) { EXPECT_NEAR(*d1[i].deviationSeconds, *d0[i].deviationSeconds + c, 1e-9); }
    }
  }
}

TEST(FitMode, ParseAndPrint) {
  for (auto m : {FitMode::None, FitMode::Offset, FitMode::Affine}) EXPECT_EQ(parseFitMode(toString(m)), m);
  EXPECT_FALSE(parseFitMode("linear"));
}

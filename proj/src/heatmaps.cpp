#include "practice/heatmaps.h"

#include <algorithm>
#include <iterator>

#include "practice/error.h"

namespace practice {

ProgressMatrix progressMatrix(std::vector<Segment> segments, const ReferenceScore& score,
                              FitMode fit) {
  std::stable_sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) {
    if (a.recordedAt != b.recordedAt) return a.recordedAt < b.recordedAt;
    return a.startSeconds < b.startSeconds;
  });
  ProgressMatrix m;
  m.exercise = score.exercise;
  m.rows = score.notes.size();
  m.cols = segments.size();
  m.cells.assign(m.rows * m.cols, std::nullopt);
  for (std::size_t j = 0; j < segments.size(); ++j) {
    Alignment a = alignNotes(segments[j].notes, score);
    auto devs = computeDeviations(a, fitTimeMap(a, score, fit), score);
    for (const auto& d : devs) m.cells[d.refIndex * m.cols + j] = d.deviationSeconds;
    m.columnRecordings.push_back(segments[j].recordingId);
    m.columnRepetitions.push_back(segments[j].repetitionIndex);
  }
  return m;
}

ProgressMatrix progressMatrix(const std::vector<Recording>& recordings,
                              const ReferenceScore& score, FitMode fit) {
  std::vector<Segment> all;
  for (const auto& r : recordings) {
    auto segs = segmentRepetitions(r, score);
    std::move(segs.begin(), segs.end(), std::back_inserter(all));
  }
  return progressMatrix(std::move(all), score, fit);
}

FretboardGrid::FretboardGrid(int strings, int frets) : strings(strings), frets(frets) {
  if (strings < 1 || frets < 0) throw ContractViolation("grid dimensions must be positive");
  counts.assign(static_cast<std::size_t>(strings * (frets + 1)), 0);
}

std::size_t FretboardGrid::index(int string, int fret) const {
  if (string < 1 || string > strings || fret < 0 || fret > frets) {
    throw ContractViolation("cell outside grid");
  }
  return static_cast<std::size_t>((string - 1) * cols() + fret);
}

std::size_t FretboardGrid::maxCount() const {
  return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
}

FretboardGrid& FretboardGrid::operator+=(const FretboardGrid& other) {
  if (!sameShape(other)) throw ContractViolation("grid dimensions differ");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  totalNotes += other.totalNotes;
  unmappedNotes += other.unmappedNotes;
  return *this;
}

FretboardGrid fretboardCounts(const std::vector<NoteEvent>& notes, int strings, int fretCount) {
  FretboardGrid g(strings, fretCount);
  for (const auto& n : notes) {
    ++g.totalNotes;
    if (n.coord && n.coord->string >= 1 && n.coord->string <= strings && n.coord->fret >= 0 &&
        n.coord->fret <= fretCount) {
      ++g.at(n.coord->string, n.coord->fret);
    } else {
      ++g.unmappedNotes;
    }
  }
  return g;
}

ComparisonGrid comparisonGrid(const FretboardGrid& a, const FretboardGrid& b) {
  if (!a.sameShape(b)) throw ContractViolation("comparison needs grids of equal dimensions");
  ComparisonGrid c{a.strings, a.frets, std::vector<CellCategory>(a.cellCount())};
  for (std::size_t i = 0; i < a.cellCount(); ++i) {
    bool inA = a.counts[i] > 0, inB = b.counts[i] > 0;
    c.cells[i] = inA ? (inB ? CellCategory::Both : CellCategory::OnlyA)
                     : (inB ? CellCategory::OnlyB : CellCategory::Neither);
  }
  return c;
}

}  // namespace practice

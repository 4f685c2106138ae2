#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "practice/alignment.h"
#include "practice/midi.h"

namespace practice {

/// Rows are reference notes (top = index 0), columns are repetitions in
/// chronological order.
struct ProgressMatrix {
  std::string exercise;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::optional<double>> cells;  // row-major, absent = missed
  std::vector<std::string> columnRecordings;
  std::vector<std::size_t> columnRepetitions;

  const std::optional<double>& at(std::size_t row, std::size_t col) const {
    return cells[row * cols + col];
  }
};

/// Segments are reordered by (recordedAt, startSeconds) before aligning.
ProgressMatrix progressMatrix(std::vector<Segment> segments, const ReferenceScore& score,
                              FitMode fit = FitMode::Affine);

/// Segments every recording and concatenates the repetitions chronologically.
ProgressMatrix progressMatrix(const std::vector<Recording>& recordings,
                              const ReferenceScore& score, FitMode fit = FitMode::Affine);

struct FretboardGrid {
  int strings = 6;
  int frets = kDefaultFretCount;  // columns = frets + 1
  std::vector<std::size_t> counts;
  std::size_t totalNotes = 0;
  std::size_t unmappedNotes = 0;

  FretboardGrid() : counts(static_cast<std::size_t>(strings * (frets + 1)), 0) {}
  FretboardGrid(int strings, int frets);

  int cols() const noexcept { return frets + 1; }
  std::size_t cellCount() const noexcept { return counts.size(); }
  std::size_t& at(int string, int fret) { return counts[index(string, fret)]; }
  std::size_t at(int string, int fret) const { return counts[index(string, fret)]; }
  std::size_t maxCount() const;
  bool sameShape(const FretboardGrid& other) const noexcept {
    return strings == other.strings && frets == other.frets;
  }

  FretboardGrid& operator+=(const FretboardGrid& other);
  friend bool operator==(const FretboardGrid&, const FretboardGrid&) = default;

 private:
  std::size_t index(int string, int fret) const;
};

FretboardGrid fretboardCounts(const std::vector<NoteEvent>& notes, int strings = 6,
                              int fretCount = kDefaultFretCount);

enum class CellCategory { Neither, OnlyA, OnlyB, Both };

struct ComparisonGrid {
  int strings = 6;
  int frets = kDefaultFretCount;
  std::vector<CellCategory> cells;

  int cols() const noexcept { return frets + 1; }
  CellCategory at(int string, int fret) const {
    return cells[static_cast<std::size_t>((string - 1) * cols() + fret)];
  }
};

ComparisonGrid comparisonGrid(const FretboardGrid& a, const FretboardGrid& b);

}  // namespace practice

#include "practice/alignment.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "practice/error.h"

namespace practice {

namespace {

enum class Step : unsigned char { None, Diagonal, Deletion, Insertion };

struct DpTable {
  std::size_t rows, cols;  // (ref + 1) x (recorded + 1)
  std::vector<int> cost;
  int& at(std::size_t i, std::size_t j) { return cost[i * cols + j]; }
  int at(std::size_t i, std::size_t j) const { return cost[i * cols + j]; }
};

// Edit-distance table over (reference, recorded) prefixes; the caller picks the end column.
DpTable fillTable(const std::vector<NoteEvent>& rec, std::size_t recCount,
                  const ReferenceScore& score) {
  const std::size_t m = score.notes.size();
  DpTable t{m + 1, recCount + 1, std::vector<int>((m + 1) * (recCount + 1))};
  for (std::size_t i = 0; i <= m; ++i) t.at(i, 0) = static_cast<int>(i);
  for (std::size_t j = 0; j <= recCount; ++j) t.at(0, j) = static_cast<int>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= recCount; ++j) {
      int diag = t.at(i - 1, j - 1) + (score.notes[i - 1].pitch == rec[j - 1].pitch ? 0 : 1);
      int del = t.at(i - 1, j) + 1;
      int ins = t.at(i, j - 1) + 1;
      t.at(i, j) = std::min({diag, del, ins});
    }
  }
  return t;
}

Alignment traceback(const DpTable& t, const std::vector<NoteEvent>& rec, std::size_t endCol,
                    const ReferenceScore& score) {
  const std::size_t m = score.notes.size();
  Alignment a;
  a.cost = t.at(m, endCol);
  a.pairs.resize(m);
  for (std::size_t i = 0; i < m; ++i) a.pairs[i].refIndex = i;
  a.segmentStartSeconds = endCol > 0 ? rec.front().onsetSeconds : 0.0;

  std::size_t i = m, j = endCol;
  while (i > 0 || j > 0) {
    int here = t.at(i, j);
    if (i > 0 && j > 0) {
      bool same = score.notes[i - 1].pitch == rec[j - 1].pitch;
      if (t.at(i - 1, j - 1) + (same ? 0 : 1) == here) {
        if (same) {
          a.pairs[i - 1].recorded = MatchedNote{j - 1, rec[j - 1]};
        } else {
          a.insertions.push_back({j - 1, rec[j - 1]});
        }
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && t.at(i - 1, j) + 1 == here) {
      --i;
      continue;
    }
    a.insertions.push_back({j - 1, rec[j - 1]});
    --j;
  }
  std::reverse(a.insertions.begin(), a.insertions.end());
  return a;
}

}  // namespace

std::size_t Alignment::matchedCount() const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const AlignedPair& p) { return p.recorded.has_value(); }));
}

Alignment alignNotes(const std::vector<NoteEvent>& segmentNotes, const ReferenceScore& score) {
  auto table = fillTable(segmentNotes, segmentNotes.size(), score);
  return traceback(table, segmentNotes, segmentNotes.size(), score);
}

std::vector<Segment> segmentRepetitions(const Recording& recording, const ReferenceScore& score) {
  std::vector<Segment> segments;
  const std::size_t m = score.notes.size();
  if (m == 0) return segments;
  const auto& all = recording.notes;

  std::size_t cursor = 0;
  while (cursor < all.size() &&
         static_cast<double>(all.size() - cursor) >= kMinimumMatchRate * static_cast<double>(m)) {
    std::vector<NoteEvent> rest(all.begin() + static_cast<std::ptrdiff_t>(cursor), all.end());
    auto table = fillTable(rest, rest.size(), score);
    std::size_t endCol = 0;
    for (std::size_t j = 1; j <= rest.size(); ++j) {
      if (table.at(m, j) < table.at(m, endCol)) endCol = j;
    }
    Alignment a = traceback(table, rest, endCol, score);
    double rate = static_cast<double>(a.matchedCount()) / static_cast<double>(m);
    if (rate < kMinimumMatchRate) break;

    std::size_t lastMatched = 0;
    for (const auto& p : a.pairs) {
      if (p.recorded) lastMatched = std::max(lastMatched, p.recorded->index);
    }
    Segment seg;
    seg.recordingId = recording.id;
    seg.recordedAt = recording.meta.recordedAt;
    seg.repetitionIndex = segments.size();
    seg.firstNoteIndex = cursor;
    seg.notes.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(lastMatched + 1));
    seg.startSeconds = seg.notes.front().onsetSeconds;
    seg.matchRate = rate;
    segments.push_back(std::move(seg));
    cursor += lastMatched + 1;
  }
  return segments;
}

std::string_view toString(FitMode mode) {
  switch (mode) {
    case FitMode::None: return "none";
    case FitMode::Offset: return "offset";
    case FitMode::Affine: return "affine";
  }
  return "affine";
}

std::optional<FitMode> parseFitMode(std::string_view text) {
  if (text == "none") return FitMode::None;
  if (text == "offset") return FitMode::Offset;
  if (text == "affine") return FitMode::Affine;
  return std::nullopt;
}

TimeMap fitTimeMap(const Alignment& alignment, const ReferenceScore& score, FitMode mode) {
  std::vector<double> beats, onsets;
  for (const auto& p : alignment.pairs) {
    if (!p.recorded) continue;
    beats.push_back(score.notes.at(p.refIndex).onsetBeats);
    onsets.push_back(p.recorded->note.onsetSeconds);
  }
  const double nominal = score.secondsPerBeat();
  const auto n = static_cast<double>(beats.size());

  if (mode == FitMode::Affine) {
    double meanBeat = 0.0, meanOnset = 0.0;
    for (std::size_t k = 0; k < beats.size(); ++k) {
      meanBeat += beats[k];
      meanOnset += onsets[k];
    }
    if (!beats.empty()) {
      meanBeat /= n;
      meanOnset /= n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < beats.size(); ++k) {
      sxx += (beats[k] - meanBeat) * (beats[k] - meanBeat);
      sxy += (beats[k] - meanBeat) * (onsets[k] - meanOnset);
    }
    if (beats.size() >= 2 && sxx > 0.0) {
      double slope = sxy / sxx;
      if (slope > 0.0) return {FitMode::Affine, slope, meanOnset - slope * meanBeat};
    }
    mode = FitMode::Offset;
  }
  if (mode == FitMode::Offset && !beats.empty()) {
    double offset = 0.0;
    for (std::size_t k = 0; k < beats.size(); ++k) offset += onsets[k] - nominal * beats[k];
    return {FitMode::Offset, nominal, offset / n};
  }
  return {FitMode::None, nominal, alignment.segmentStartSeconds};
}

std::vector<NoteDeviation> computeDeviations(const Alignment& alignment, const TimeMap& timeMap,
                                             const ReferenceScore& score) {
  std::vector<NoteDeviation> out;
  out.reserve(alignment.pairs.size());
  for (const auto& p : alignment.pairs) {
    NoteDeviation d{p.refIndex, std::nullopt};
    if (p.recorded) {
      d.deviationSeconds = p.recorded->note.onsetSeconds - timeMap.predict(score.notes.at(p.refIndex).onsetBeats);
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace practice

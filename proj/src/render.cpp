#include "practice/render.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "practice/error.h"
#include "practice/stats.h"
#include "svg_writer.h"

namespace practice {

using svg::num;

namespace {

constexpr int kMarkerFrets[] = {3, 5, 7, 9, 12, 15, 17, 19, 21};

std::string noDataSvg(std::string_view kind, std::string_view message) {
  svg::Document doc(240.0, 60.0, {{"class", std::string(kind)}});
  doc.text(12.0, 34.0, message, {{"class", "no-data"}});
  return doc.finish();
}

void legendSwatch(svg::Document& doc, double x, double y, Rgb color, std::string_view label) {
  doc.element("rect", {{"class", "legend-swatch"},
                       {"x", num(x)},
                       {"y", num(y)},
                       {"width", num(10.0)},
                       {"height", num(10.0)},
                       {"fill", toHex(color)}});
  doc.text(x + 14.0, y + 9.0, label);
}

struct BoardGeometry {
  double left = 34.0, top = 20.0, cell = 14.0;
  int strings = 6, cols = 23;
  double width() const { return cols * cell; }
  double height() const { return strings * cell; }
};

void drawBoard(svg::Document& doc, const BoardGeometry& g, bool markers) {
  doc.element("rect", {{"class", "board"},
                       {"x", num(g.left)},
                       {"y", num(g.top)},
                       {"width", num(g.width())},
                       {"height", num(g.height())},
                       {"fill", "#f7f3ea"}});
  for (int k = 0; k <= g.cols; ++k) {
    double x = g.left + k * g.cell;
    doc.element("line", {{"class", "fret"},
                         {"x1", num(x)},
                         {"y1", num(g.top)},
                         {"x2", num(x)},
                         {"y2", num(g.top + g.height())},
                         {"stroke", k == 1 ? "#555555" : "#bbbbbb"},
                         {"stroke-width", num(k == 1 ? 3.0 : 1.0)}});
  }
  for (int s = 1; s <= g.strings; ++s) {
    double y = g.top + (s - 1) * g.cell + g.cell / 2.0;
    doc.element("line", {{"class", "string"},
                         {"x1", num(g.left)},
                         {"y1", num(y)},
                         {"x2", num(g.left + g.width())},
                         {"y2", num(y)},
                         {"stroke", "#666666"},
                         {"stroke-width", num(1.0)}});
    doc.text(g.left - 8.0, y + 3.5, std::to_string(s), {{"text-anchor", "end"}});
  }
  double markerY = g.top + g.height() + g.cell / 2.0;
  if (markers) {
    for (int f : kMarkerFrets) {
      if (f >= g.cols) continue;
      double cx = g.left + f * g.cell + g.cell / 2.0;
      std::vector<double> xs = f == 12 ? std::vector<double>{cx - g.cell * 0.2, cx + g.cell * 0.2}
                                       : std::vector<double>{cx};
      for (double x : xs) {
        doc.element("circle", {{"class", "marker"},
                               {"cx", num(x)},
                               {"cy", num(markerY)},
                               {"r", num(g.cell * 0.15)},
                               {"fill", "#999999"}});
      }
    }
  }
  double labelY = g.top + g.height() + g.cell + 10.0;
  doc.text(g.left + g.cell / 2.0, labelY, "0", {{"text-anchor", "middle"}});
  for (int f : kMarkerFrets) {
    if (f >= g.cols) continue;
    doc.text(g.left + f * g.cell + g.cell / 2.0, labelY, std::to_string(f), {{"text-anchor", "middle"}});
  }
}

svg::Attributes cellRect(double x, double y, double w, double h, Rgb fill, std::string_view cls = "cell") {
  return {{"class", std::string(cls)}, {"x", num(x)},     {"y", num(y)},
          {"width", num(w)},           {"height", num(h)}, {"fill", toHex(fill)}};
}

}  // namespace

std::string toHex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

Rgb roleColor(NoteRole role) {
  switch (role) {
    case NoteRole::Root: return palette::kRoot;
    case NoteRole::ScaleTone: return palette::kScaleTone;
    case NoteRole::BlueNote: return palette::kBlueNote;
    case NoteRole::Outside: return palette::kOutside;
  }
  return palette::kOutside;
}

Rgb lerp(Rgb from, Rgb to, double t) {
  auto ch = [t](std::uint8_t a, std::uint8_t b) {
    return static_cast<std::uint8_t>(std::lround(a + (static_cast<double>(b) - a) * t));
  };
  return {ch(from.r, to.r), ch(from.g, to.g), ch(from.b, to.b)};
}

Rgb divergingColor(double deviationSeconds, double clampSeconds) {
  double t = std::clamp(deviationSeconds / clampSeconds, -1.0, 1.0);
  return t < 0.0 ? lerp(palette::kNeutral, palette::kEarly, -t) : lerp(palette::kNeutral, palette::kLate, t);
}

double autoClampSeconds(const ProgressMatrix& m) {
  std::vector<double> mags;
  for (const auto& c : m.cells) {
    if (c) mags.push_back(std::abs(*c));
  }
  return std::max(kMinimumAutoClampSeconds, quantile(std::move(mags), 0.95));
}

Rgb hsvToRgb(double hueDegrees, double saturation, double value) {
  double h = std::fmod(hueDegrees, 360.0);
  if (h < 0.0) h += 360.0;
  double c = value * saturation;
  double x = c * (1.0 - std::abs(std::fmod(h / 60.0, 2.0) - 1.0));
  double m = value - c;
  double r = 0, g = 0, b = 0;
  if (h < 60) {
    r = c, g = x;
  } else if (h < 120) {
    r = x, g = c;
  } else if (h < 180) {
    g = c, b = x;
  } else if (h < 240) {
    g = x, b = c;
  } else if (h < 300) {
    r = x, b = c;
  } else {
    r = c, b = x;
  }
  auto to8 = [m](double v) { return static_cast<std::uint8_t>(std::lround((v + m) * 255.0)); };
  return {to8(r), to8(g), to8(b)};
}

double fretHueDegrees(int fret, int fretCount) {
  return static_cast<double>(fret) / static_cast<double>(fretCount + 1) * 300.0;
}

std::string renderProgressHeatmap(const ProgressMatrix& m, const RenderOptions& opts) {
  const double c = opts.cellSizePx;
  const double left = 70.0, top = 34.0, right = 20.0, bottom = 58.0;
  const double clamp = opts.colorClampSeconds.value_or(autoClampSeconds(m));
  const double width = left + std::max(static_cast<double>(m.cols) * c, 240.0) + right;
  const double height = top + static_cast<double>(m.rows) * c + bottom;

  svg::Document doc(width, height,
                    {{"class", "progress-heatmap"}, {"data-clamp-ms", num(clamp * 1000.0)}});
  doc.text(left, 16.0, "Timing deviation per note and repetition: " + m.exercise);
  doc.text(8.0, top - 6.0, "notes");
  if (m.cols == 0) {
    doc.text(left, top + 16.0, "no data", {{"class", "no-data"}});
  }

  doc.open("g", {{"class", "cells"}});
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t col = 0; col < m.cols; ++col) {
      const auto& v = m.at(r, col);
      auto attrs = cellRect(left + col * c, top + r * c, c, c, v ? divergingColor(*v, clamp) : palette::kMiss);
      attrs.emplace_back("data-row", std::to_string(r));
      attrs.emplace_back("data-col", std::to_string(col));
      if (v) {
        attrs.emplace_back("data-ms", num(*v * 1000.0));
      } else {
        attrs.emplace_back("data-missed", "true");
      }
      doc.element("rect", attrs);
    }
  }
  doc.close();

  for (std::size_t r = 0; r < m.rows; ++r) {
    doc.text(left - 6.0, top + r * c + c * 0.72, std::to_string(r), {{"text-anchor", "end"}});
  }
  for (std::size_t col = 0; col < m.cols; ++col) {
    doc.text(left + col * c + c / 2.0, top + m.rows * c + 12.0, std::to_string(col),
             {{"text-anchor", "middle"}});
  }
  double axisY = top + m.rows * c + 26.0;
  doc.text(left, axisY, "repetitions (chronological)");
  double legendY = axisY + 10.0;
  legendSwatch(doc, left, legendY, palette::kEarly, "early");
  legendSwatch(doc, left + 60.0, legendY, palette::kNeutral, "on time");
  legendSwatch(doc, left + 130.0, legendY, palette::kLate, "late");
  legendSwatch(doc, left + 180.0, legendY, palette::kMiss, "missed");
  return doc.finish();
}

std::string renderFretboard(const FretboardGrid& grid, const RenderOptions& opts) {
  BoardGeometry g;
  g.cell = opts.cellSizePx;
  g.strings = grid.strings;
  g.cols = grid.cols();
  const double width = g.left + g.width() + 12.0;
  const double height = g.top + g.height() + g.cell + 18.0;
  const std::size_t maxCount = grid.maxCount();

  svg::Document doc(width, height,
                    {{"class", "fretboard"}, {"data-total-notes", std::to_string(grid.totalNotes)}});
  drawBoard(doc, g, opts.showFretMarkers);
  doc.open("g", {{"class", "cells"}});
  for (int s = 1; s <= grid.strings; ++s) {
    for (int f = 0; f <= grid.frets; ++f) {
      std::size_t count = grid.at(s, f);
      if (count == 0) continue;
      auto attrs = cellRect(g.left + f * g.cell + 1.0, g.top + (s - 1) * g.cell + 1.0, g.cell - 2.0,
                            g.cell - 2.0, palette::kCount);
      attrs.emplace_back("fill-opacity", num(static_cast<double>(count) / static_cast<double>(maxCount)));
      attrs.emplace_back("data-string", std::to_string(s));
      attrs.emplace_back("data-fret", std::to_string(f));
      attrs.emplace_back("data-count", std::to_string(count));
      doc.element("rect", attrs);
    }
  }
  doc.close();
  return doc.finish();
}

std::string renderFretboard(const ComparisonGrid& grid, const RenderOptions& opts) {
  BoardGeometry g;
  g.cell = opts.cellSizePx;
  g.strings = grid.strings;
  g.cols = grid.cols();
  const double width = std::max(g.left + g.width() + 12.0, 260.0);
  const double legendY = g.top + g.height() + g.cell + 22.0;
  const double height = legendY + 20.0;

  svg::Document doc(width, height, {{"class", "fretboard-comparison"}});
  drawBoard(doc, g, opts.showFretMarkers);
  doc.open("g", {{"class", "cells"}});
  for (int s = 1; s <= grid.strings; ++s) {
    for (int f = 0; f <= grid.frets; ++f) {
      CellCategory cat = grid.at(s, f);
      if (cat == CellCategory::Neither) continue;
      Rgb fill = cat == CellCategory::OnlyA ? palette::kOnlyA
                 : cat == CellCategory::OnlyB ? palette::kOnlyB
                                              : palette::kBoth;
      auto attrs = cellRect(g.left + f * g.cell + 1.0, g.top + (s - 1) * g.cell + 1.0, g.cell - 2.0,
                            g.cell - 2.0, fill);
      attrs.emplace_back("data-string", std::to_string(s));
      attrs.emplace_back("data-fret", std::to_string(f));
      attrs.emplace_back("data-category", cat == CellCategory::OnlyA   ? "onlyA"
                                          : cat == CellCategory::OnlyB ? "onlyB"
                                                                       : "both");
      doc.element("rect", attrs);
    }
  }
  doc.close();
  legendSwatch(doc, g.left, legendY, palette::kOnlyA, "only A");
  legendSwatch(doc, g.left + 70.0, legendY, palette::kOnlyB, "only B");
  legendSwatch(doc, g.left + 140.0, legendY, palette::kBoth, "both");
  return doc.finish();
}

std::string renderSimilarityMap(const Layout2D& layout, const std::vector<FretboardGrid>& grids,
                                const RenderOptions& opts, std::span<const std::string> labels) {
  const std::size_t n = grids.size();
  if (layout.gridCells.size() != n || layout.outlierFlags.size() != n) {
    throw ContractViolation("layout and grid list differ in length");
  }
  if (!labels.empty() && labels.size() != n) throw ContractViolation("label count differs from grid count");
  if (n == 0) return noDataSvg("similarity-map", "no data");

  const int strings = grids.front().strings, cols = grids.front().cols();
  const int frets = grids.front().frets;
  std::size_t maxAll = 0;
  for (const auto& g : grids) {
    if (!g.sameShape(grids.front())) throw ContractViolation("grids differ in dimensions");
    maxAll = std::max(maxAll, g.maxCount());
  }
  auto fillFor = [&](int fret, std::size_t count) {
    double sat = maxAll == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(maxAll);
    return std::make_pair(hsvToRgb(fretHueDegrees(fret, frets), sat, 0.9), sat);
  };
  auto labelOf = [&](std::size_t i) { return labels.empty() ? std::to_string(i) : labels[i]; };

  const double g = std::max(2, opts.cellSizePx / 3);
  const double glyphW = cols * g, glyphH = strings * g, pad = 16.0;
  const double slotW = glyphW + pad, slotH = glyphH + pad;
  auto outlier = std::find(layout.outlierFlags.begin(), layout.outlierFlags.end(), true);
  const bool hasCallout = outlier != layout.outlierFlags.end();
  const double zoom = opts.cellSizePx;
  const double calloutW = cols * zoom, calloutH = hasCallout ? strings * zoom + 36.0 : 0.0;
  const double gridW = layout.shape.cols * slotW, gridH = layout.shape.rows * slotH;
  const double width = std::max(gridW, calloutW) + 40.0;
  const double height = 30.0 + calloutH + gridH + 20.0;

  svg::Document doc(width, height, {{"class", "similarity-map"}, {"data-stress", num(layout.stress)}});
  doc.text(20.0, 18.0, "Recordings placed by heatmap similarity");

  if (hasCallout) {
    auto idx = static_cast<std::size_t>(outlier - layout.outlierFlags.begin());
    const auto& grid = grids[idx];
    double ox = (width - calloutW) / 2.0, oy = 30.0 + 16.0;
    doc.open("g", {{"class", "callout"}, {"data-index", std::to_string(idx)}, {"data-recording", labelOf(idx)}});
    doc.text(ox, oy - 6.0, "outlier: " + labelOf(idx));
    doc.element("rect", {{"class", "callout-frame"},
                         {"x", num(ox)},
                         {"y", num(oy)},
                         {"width", num(calloutW)},
                         {"height", num(strings * zoom)},
                         {"fill", "#ffffff"},
                         {"stroke", toHex(palette::kLate)},
                         {"stroke-width", num(2.0)}});
    for (int s = 1; s <= strings; ++s) {
      for (int f = 0; f <= frets; ++f) {
        std::size_t count = grid.at(s, f);
        if (count == 0) continue;
        auto [rgb, sat] = fillFor(f, count);
        doc.element("rect", cellRect(ox + f * zoom, oy + (s - 1) * zoom, zoom, zoom, rgb, "callout-cell"));
      }
    }
    doc.close();
  }

  const double x0 = (width - gridW) / 2.0, y0 = 30.0 + calloutH;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cell = layout.gridCells[i];
    double gx = x0 + cell.col * slotW + pad / 2.0, gy = y0 + cell.row * slotH + pad / 2.0;
    doc.open("g", {{"class", "glyph"},
                   {"data-index", std::to_string(i)},
                   {"data-recording", labelOf(i)},
                   {"data-row", std::to_string(cell.row)},
                   {"data-col", std::to_string(cell.col)},
                   {"data-outlier", layout.outlierFlags[i] ? "true" : "false"},
                   {"transform", "translate(" + num(gx) + "," + num(gy) + ")"}});
    doc.element("rect", {{"class", "glyph-bg"},
                         {"x", num(0.0)},
                         {"y", num(0.0)},
                         {"width", num(glyphW)},
                         {"height", num(glyphH)},
                         {"fill", "#ffffff"},
                         {"stroke", "#cccccc"},
                         {"stroke-width", num(1.0)}});
    for (int s = 1; s <= strings; ++s) {
      for (int f = 0; f <= frets; ++f) {
        std::size_t count = grids[i].at(s, f);
        if (count == 0) continue;
        auto [rgb, sat] = fillFor(f, count);
        auto attrs = cellRect(f * g, (s - 1) * g, g, g, rgb);
        attrs.emplace_back("data-string", std::to_string(s));
        attrs.emplace_back("data-fret", std::to_string(f));
        attrs.emplace_back("data-saturation", num(sat));
        doc.element("rect", attrs);
      }
    }
    if (layout.outlierFlags[i]) {
      doc.element("rect", {{"class", "outlier-ring"},
                           {"x", num(-3.0)},
                           {"y", num(-3.0)},
                           {"width", num(glyphW + 6.0)},
                           {"height", num(glyphH + 6.0)},
                           {"rx", num(3.0)},
                           {"fill", "none"},
                           {"stroke", toHex(palette::kLate)},
                           {"stroke-width", num(2.0)}});
    }
    doc.close();
  }
  return doc.finish();
}

std::string renderRoleSequence(const std::vector<RoleSequence>& sequences, const ScaleSpec& spec,
                               const RenderOptions& opts) {
  if (sequences.empty()) return noDataSvg("role-sequence", "no data");
  const double rowH = 18.0, gap = 6.0, left = 130.0, top = 24.0;
  const double timeline = opts.timelineWidthPx;
  const double width = left + timeline + 20.0;
  const double legendY = top + sequences.size() * (rowH + gap) + 18.0;
  const double height = legendY + 24.0;

  auto endOf = [](const RoleSequence& s) {
    double end = 0.0;
    for (const auto& span : s.spans) end = std::max(end, span.startSeconds + span.durationSeconds);
    return end;
  };
  double globalEnd = 0.0;
  for (const auto& s : sequences) globalEnd = std::max(globalEnd, endOf(s));

  svg::Document doc(width, height, {{"class", "role-sequence"}});
  doc.text(left, 14.0, "Note roles over time: " + spec.name);
  for (std::size_t r = 0; r < sequences.size(); ++r) {
    const auto& seq = sequences[r];
    double end = opts.roleTimeAxis == RoleTimeAxis::Absolute ? globalEnd : endOf(seq);
    double scale = end > 0.0 ? timeline / end : 0.0;
    double y = top + r * (rowH + gap);
    doc.open("g", {{"class", "row"},
                   {"data-recording", seq.recordingId},
                   {"transform", "translate(" + num(left) + "," + num(y) + ")"}});
    doc.text(-8.0, rowH * 0.7, seq.recordingId, {{"text-anchor", "end"}});
    doc.element("line", {{"class", "row-axis"},
                         {"x1", num(0.0)},
                         {"y1", num(rowH / 2.0)},
                         {"x2", num(timeline)},
                         {"y2", num(rowH / 2.0)},
                         {"stroke", "#dddddd"},
                         {"stroke-width", num(1.0)}});
    for (const auto& span : seq.spans) {
      doc.element("rect", {{"class", "span"},
                           {"x", num(span.startSeconds * scale)},
                           {"y", num(0.0)},
                           {"width", num(span.durationSeconds * scale)},
                           {"height", num(rowH)},
                           {"rx", num(3.0)},
                           {"ry", num(3.0)},
                           {"fill", toHex(roleColor(span.role))},
                           {"data-role", std::string(toString(span.role))},
                           {"data-pitch", std::to_string(span.pitch)},
                           {"data-duration-ms", num(span.durationSeconds * 1000.0)}});
    }
    doc.close();
  }

  auto names = [&](const std::set<int>& pcs, bool skipRoot) {
    std::vector<int> ordered(pcs.begin(), pcs.end());
    std::sort(ordered.begin(), ordered.end(), [&](int a, int b) {
      return (a - spec.rootPitchClass + 12) % 12 < (b - spec.rootPitchClass + 12) % 12;
    });
    std::string out;
    for (int pc : ordered) {
      if (skipRoot && pc == spec.rootPitchClass) continue;
      if (!out.empty()) out += ' ';
      out += pitchClassName(pc);
    }
    return out;
  };
  legendSwatch(doc, left, legendY, palette::kRoot, "root: " + std::string(pitchClassName(spec.rootPitchClass)));
  legendSwatch(doc, left + 90.0, legendY, palette::kScaleTone, "scale: " + names(spec.scalePitchClasses, true));
  legendSwatch(doc, left + 220.0, legendY, palette::kBlueNote, "blue note: " + names(spec.bluePitchClasses, false));
  legendSwatch(doc, left + 330.0, legendY, palette::kOutside, "outside");
  return doc.finish();
}

}  // namespace practice

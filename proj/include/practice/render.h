#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "practice/heatmaps.h"
#include "practice/similarity.h"
#include "practice/theory.h"

namespace practice {

enum class RoleTimeAxis { Absolute, Normalized };

struct RenderOptions {
  int cellSizePx = 14;
  // Seconds mapped to the ends of the diverging scale; unset means auto.
  std::optional<double> colorClampSeconds;
  bool showFretMarkers = true;
  RoleTimeAxis roleTimeAxis = RoleTimeAxis::Absolute;
  int timelineWidthPx = 500;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Lowercase "#rrggbb".
std::string toHex(Rgb c);

namespace palette {
inline constexpr Rgb kEarly{0x21, 0x66, 0xAC};
inline constexpr Rgb kNeutral{0xFF, 0xFF, 0xFF};
inline constexpr Rgb kLate{0xB2, 0x18, 0x2B};
inline constexpr Rgb kMiss{0x40, 0x40, 0x40};
inline constexpr Rgb kOnlyA{0xD6, 0x60, 0x4D};
inline constexpr Rgb kOnlyB{0x43, 0x93, 0xC3};
inline constexpr Rgb kBoth{0x88, 0x88, 0x88};
inline constexpr Rgb kRoot{0x1B, 0x78, 0x37};
inline constexpr Rgb kScaleTone{0x7F, 0xBF, 0x7B};
inline constexpr Rgb kBlueNote{0x21, 0x66, 0xAC};
inline constexpr Rgb kOutside{0x99, 0x99, 0x99};
// Single hue used for count heatmaps, scaled by opacity.
inline constexpr Rgb kCount{0xB2, 0x18, 0x2B};
}  // namespace palette

Rgb roleColor(NoteRole role);

/// Channel-wise linear interpolation, rounded half away from zero.
Rgb lerp(Rgb from, Rgb to, double t);

/// Blue below zero, white at zero, red above; saturates at +-clamp.
Rgb divergingColor(double deviationSeconds, double clampSeconds);

inline constexpr double kMinimumAutoClampSeconds = 0.05;

/// 95th percentile of |deviation| over defined cells, floored at 0.05 s.
double autoClampSeconds(const ProgressMatrix& m);

/// Hue in degrees, saturation and value in [0, 1].
Rgb hsvToRgb(double hueDegrees, double saturation, double value);

/// Glyph hue for a fret column: fret / (fretCount + 1) * 300 degrees.
double fretHueDegrees(int fret, int fretCount);

std::string renderProgressHeatmap(const ProgressMatrix& m, const RenderOptions& opts = {});
std::string renderFretboard(const FretboardGrid& grid, const RenderOptions& opts = {});
std::string renderFretboard(const ComparisonGrid& grid, const RenderOptions& opts = {});
std::string renderSimilarityMap(const Layout2D& layout, const std::vector<FretboardGrid>& grids,
                                const RenderOptions& opts = {},
                                std::span<const std::string> labels = {});
std::string renderRoleSequence(const std::vector<RoleSequence>& sequences, const ScaleSpec& spec,
                               const RenderOptions& opts = {});

}  // namespace practice

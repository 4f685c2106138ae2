#pragma once

#include <array>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "practice/recording.h"

namespace practice {

struct ScaleSpec {
  std::string name;
  int rootPitchClass = 0;
  std::set<int> scalePitchClasses;
  std::set<int> bluePitchClasses;

  /// A minor pentatonic with the flat fifth (E flat) as blue note.
  static ScaleSpec aMinorPentatonicBlues();

  friend bool operator==(const ScaleSpec&, const ScaleSpec&) = default;
};

/// Throws ValidationError unless the root is a scale tone, the blue set is
/// disjoint from the scale, and every pitch class lies in 0..11.
void validate(const ScaleSpec& spec);

ScaleSpec scaleSpecFromJson(std::string_view text);
std::string scaleSpecToJson(const ScaleSpec& spec);

enum class NoteRole { Root, ScaleTone, BlueNote, Outside };

inline constexpr std::array<NoteRole, 4> kAllRoles = {NoteRole::Root, NoteRole::ScaleTone,
                                                      NoteRole::BlueNote, NoteRole::Outside};

std::string_view toString(NoteRole role);
std::string_view pitchClassName(int pitchClass);

NoteRole classifyNote(int pitch, const ScaleSpec& spec);

struct RoleSpan {
  double startSeconds = 0.0;
  double durationSeconds = 0.0;
  NoteRole role = NoteRole::Outside;
  int pitch = 0;
};

struct RoleSequence {
  std::string recordingId;
  std::vector<RoleSpan> spans;
};

RoleSequence roleSequence(const Recording& recording, const ScaleSpec& spec);

/// Fraction of total sounding duration per role, indexed by NoteRole.
using RoleShares = std::array<double, 4>;

inline double share(const RoleShares& shares, NoteRole role) {
  return shares[static_cast<std::size_t>(role)];
}

RoleShares roleDurationShares(const RoleSequence& sequence);

}  // namespace practice

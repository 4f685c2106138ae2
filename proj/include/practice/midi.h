#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "practice/score.h"

namespace practice {

enum class EventKind { NoteOn, NoteOff, TempoChange, Other };

struct RawEvent {
  std::uint64_t tick = 0;
  EventKind kind = EventKind::Other;
  std::optional<int> channel;  // absent for meta and sysex events
  int pitch = 0;
  int velocity = 0;
  std::uint32_t microsecondsPerQuarter = 0;  // TempoChange only
};

struct TempoEntry {
  std::uint64_t tick = 0;
  std::uint32_t microsecondsPerQuarter = 500000;

  friend bool operator==(const TempoEntry&, const TempoEntry&) = default;
};

/// Tick to seconds conversion table. Always holds an entry at tick 0.
class TempoMap {
 public:
  explicit TempoMap(int ppq, std::vector<TempoEntry> changes = {});

  int ppq() const noexcept { return ppq_; }
  const std::vector<TempoEntry>& entries() const noexcept { return entries_; }

 private:
  int ppq_;
  std::vector<TempoEntry> entries_;
};

struct SmfContents {
  int format = 0;
  TempoMap tempo{480};
  // All tracks merged, ordered by tick; equal ticks keep track order then file order.
  std::vector<RawEvent> events;
  std::uint64_t endTick = 0;
};

/// Decodes one variable-length quantity at `offset`, advancing it.
std::uint32_t decodeVarLen(std::span<const std::uint8_t> bytes, std::size_t& offset);

/// Parses a format 0 or 1 Standard MIDI File with PPQ time division.
/// Throws ParseError (with the failing byte offset) on any malformed input.
SmfContents parseSmf(std::span<const std::uint8_t> bytes);

double ticksToSeconds(const TempoMap& tempo, std::uint64_t tick);

struct NoteEvent {
  int pitch = 0;
  double onsetSeconds = 0.0;
  double durationSeconds = 0.0;
  int velocity = 0;
  int channel = 0;
  std::optional<FretboardCoord> coord;
  std::uint64_t onsetTick = 0;
  std::uint64_t durationTicks = 0;

  double endSeconds() const noexcept { return onsetSeconds + durationSeconds; }
};

/// Non-fatal oddities encountered while turning events into notes.
struct IngestDiagnostics {
  std::size_t orphanNoteOffs = 0;     // off without a matching open on
  std::size_t unclosedNotes = 0;      // closed at the final tick
  std::size_t zeroLengthNotes = 0;    // dropped, on and off on the same tick
  std::size_t negativeFretMappings = 0;
  std::size_t unplayableNotes = 0;

  std::size_t total() const noexcept {
    return orphanNoteOffs + unclosedNotes + zeroLengthNotes + negativeFretMappings +
           unplayableNotes;
  }
  std::string toJson() const;
};

/// Matches note-ons with offs (FIFO per pitch and channel). Notes still open
/// at the end are closed at `endTick`. Output is sorted by (onset, pitch).
std::vector<NoteEvent> pairNotes(std::span<const RawEvent> events, const TempoMap& tempo,
                                 std::uint64_t endTick, IngestDiagnostics* diagnostics = nullptr);
std::vector<NoteEvent> pairNotes(const SmfContents& smf, IngestDiagnostics* diagnostics = nullptr);

/// MIDI channel (0-15) to string number.
using ChannelMap = std::map<int, int>;

/// Hexaphonic pickup convention: channels 0..5 carry strings 1..6.
ChannelMap defaultChannelMap(int stringCount = 6);

std::optional<FretboardCoord> inferStringFret(const NoteEvent& note, const ChannelMap* channelMap,
                                              const Tuning& tuning,
                                              int fretCount = kDefaultFretCount,
                                              IngestDiagnostics* diagnostics = nullptr);

/// Convenience pipeline: parse, pair, and attach coordinates.
std::vector<NoteEvent> readNotes(std::span<const std::uint8_t> bytes, const ChannelMap* channelMap,
                                 const Tuning& tuning, int fretCount = kDefaultFretCount,
                                 IngestDiagnostics* diagnostics = nullptr);

}  // namespace practice

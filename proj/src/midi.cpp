#include "practice/midi.h"

#include <algorithm>
#include <deque>
#include <string_view>

#include <json.hpp>

#include "practice/error.h"

namespace practice {

namespace {

constexpr std::uint32_t kDefaultTempo = 500000;

std::uint32_t readBe32(std::span<const std::uint8_t> b, std::size_t pos) {
  return (std::uint32_t{b[pos]} << 24) | (std::uint32_t{b[pos + 1]} << 16) |
         (std::uint32_t{b[pos + 2]} << 8) | std::uint32_t{b[pos + 3]};
}

std::uint16_t readBe16(std::span<const std::uint8_t> b, std::size_t pos) {
  return static_cast<std::uint16_t>((b[pos] << 8) | b[pos + 1]);
}

bool hasTag(std::span<const std::uint8_t> b, std::size_t pos, std::string_view tag) {
  return pos + 4 <= b.size() && std::equal(tag.begin(), tag.end(), b.begin() + pos);
}

// Parses the body of one MTrk chunk; `base` is the chunk body's absolute offset.
std::uint64_t parseTrack(std::span<const std::uint8_t> body, std::size_t base,
                         std::vector<RawEvent>& out) {
  std::size_t p = 0;
  std::uint64_t tick = 0;
  std::uint8_t running = 0;
  auto need = [&](std::size_t n) {
    if (p + n > body.size()) throw ParseError("truncated track event", base + p);
  };
  while (p < body.size()) {
    std::size_t eventStart = p;
    try {
      tick += decodeVarLen(body, p);
    } catch (const ParseError& e) {
      throw ParseError("bad delta time", base + e.offset());
    }
    need(1);
    std::uint8_t status = body[p];
    if (status & 0x80) {
      ++p;
    } else if (running != 0) {
      status = running;
    } else {
      throw ParseError("data byte without running status", base + p);
    }

    if (status == 0xFF) {
      running = 0;
      need(1);
      std::uint8_t type = body[p++];
      std::uint32_t len;
      try {
        len = decodeVarLen(body, p);
      } catch (const ParseError& e) {
        throw ParseError("bad meta length", base + e.offset());
      }
      need(len);
      if (type == 0x51) {
        if (len != 3) throw ParseError("tempo meta event must carry 3 bytes", base + eventStart);
        std::uint32_t us = (std::uint32_t{body[p]} << 16) | (std::uint32_t{body[p + 1]} << 8) |
                           std::uint32_t{body[p + 2]};
        if (us == 0) throw ParseError("zero tempo", base + p);
        RawEvent ev;
        ev.tick = tick;
        ev.kind = EventKind::TempoChange;
        ev.microsecondsPerQuarter = us;
        out.push_back(ev);
      }
      p += len;
      if (type == 0x2F) break;
      continue;
    }
    if (status == 0xF0 || status == 0xF7) {
      running = 0;
      std::uint32_t len;
      try {
        len = decodeVarLen(body, p);
      } catch (const ParseError& e) {
        throw ParseError("bad sysex length", base + e.offset());
      }
      need(len);
      p += len;
      continue;
    }
    if (status >= 0xF0) throw ParseError("unexpected system message in file", base + eventStart);

    running = status;
    std::uint8_t hi = status & 0xF0;
    std::size_t dataBytes = (hi == 0xC0 || hi == 0xD0) ? 1 : 2;
    need(dataBytes);
    for (std::size_t i = 0; i < dataBytes; ++i) {
      if (body[p + i] & 0x80) throw ParseError("data byte out of range", base + p + i);
    }
    RawEvent ev;
    ev.tick = tick;
    ev.channel = status & 0x0F;
    if (hi == 0x90 || hi == 0x80) {
      ev.pitch = body[p];
      ev.velocity = body[p + 1];
      ev.kind = (hi == 0x90 && ev.velocity > 0) ? EventKind::NoteOn : EventKind::NoteOff;
    } else {
      ev.kind = EventKind::Other;
    }
    out.push_back(ev);
    p += dataBytes;
  }
  return tick;
}

}  // namespace

TempoMap::TempoMap(int ppq, std::vector<TempoEntry> changes) : ppq_(ppq) {
  if (ppq <= 0) throw ContractViolation("ppq must be positive");
  std::stable_sort(changes.begin(), changes.end(),
                   [](const TempoEntry& a, const TempoEntry& b) { return a.tick < b.tick; });
  for (const auto& c : changes) {
    if (c.microsecondsPerQuarter == 0) throw ContractViolation("tempo must be positive");
    if (!entries_.empty() && entries_.back().tick == c.tick) {
      entries_.back() = c;  // later event at the same tick wins
    } else {
      entries_.push_back(c);
    }
  }
  if (entries_.empty() || entries_.front().tick != 0) {
    entries_.insert(entries_.begin(), TempoEntry{0, kDefaultTempo});
  }
}

std::uint32_t decodeVarLen(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  std::uint32_t value = 0;
  for (int i = 0; i < 4; ++i) {
    if (offset >= bytes.size()) throw ParseError("truncated variable-length quantity", offset);
    std::uint8_t b = bytes[offset++];
    value = (value << 7) | (b & 0x7F);
    if (!(b & 0x80)) return value;
  }
  throw ParseError("variable-length quantity longer than 4 bytes", offset - 1);
}

SmfContents parseSmf(std::span<const std::uint8_t> bytes) {
  if (!hasTag(bytes, 0, "MThd")) throw ParseError("missing MThd header", 0);
  if (bytes.size() < 8) throw ParseError("truncated header", bytes.size());
  std::uint32_t headerLen = readBe32(bytes, 4);
  if (headerLen < 6) throw ParseError("header chunk shorter than 6 bytes", 4);
  if (8 + std::uint64_t{headerLen} > bytes.size()) throw ParseError("truncated header", bytes.size());

  int format = readBe16(bytes, 8);
  int trackCount = readBe16(bytes, 10);
  std::uint16_t division = readBe16(bytes, 12);
  if (format == 2) throw ParseError("SMF format 2 is not supported", 8);
  if (format > 2) throw ParseError("unknown SMF format", 8);
  if (division & 0x8000) throw ParseError("SMPTE time division is not supported", 12);
  if (division == 0) throw ParseError("zero ticks per quarter note", 12);
  if (format == 0 && trackCount != 1) throw ParseError("format 0 must contain one track", 10);

  std::vector<RawEvent> events;
  std::uint64_t endTick = 0;
  std::size_t pos = 8 + headerLen;
  int tracksSeen = 0;
  while (tracksSeen < trackCount) {
    if (pos + 8 > bytes.size()) {
      throw ParseError("expected " + std::to_string(trackCount) + " tracks, found " +
                           std::to_string(tracksSeen),
                       pos);
    }
    std::uint32_t len = readBe32(bytes, pos + 4);
    if (pos + 8 + std::uint64_t{len} > bytes.size()) throw ParseError("truncated chunk", pos);
    if (hasTag(bytes, pos, "MTrk")) {
      endTick = std::max(endTick, parseTrack(bytes.subspan(pos + 8, len), pos + 8, events));
      ++tracksSeen;
    }
    pos += 8 + std::size_t{len};
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const RawEvent& a, const RawEvent& b) { return a.tick < b.tick; });
  std::vector<TempoEntry> tempos;
  for (const auto& e : events) {
    if (e.kind == EventKind::TempoChange) tempos.push_back({e.tick, e.microsecondsPerQuarter});
  }
  if (!events.empty()) endTick = std::max(endTick, events.back().tick);
  return SmfContents{format, TempoMap(division, std::move(tempos)), std::move(events), endTick};
}

double ticksToSeconds(const TempoMap& tempo, std::uint64_t tick) {
  // Exact integer sum of tick * microseconds; one division at the end.
  unsigned __int128 numerator = 0;
  const auto& entries = tempo.entries();
  for (std::size_t i = 0; i < entries.size() && entries[i].tick < tick; ++i) {
    std::uint64_t segEnd = (i + 1 < entries.size()) ? std::min(entries[i + 1].tick, tick) : tick;
    numerator += static_cast<unsigned __int128>(segEnd - entries[i].tick) *
                 entries[i].microsecondsPerQuarter;
  }
  long double denom = static_cast<long double>(tempo.ppq()) * 1e6L;
  return static_cast<double>(static_cast<long double>(numerator) / denom);
}

std::string IngestDiagnostics::toJson() const {
  nlohmann::json j = {{"orphanNoteOffs", orphanNoteOffs},
                      {"unclosedNotes", unclosedNotes},
                      {"zeroLengthNotes", zeroLengthNotes},
                      {"negativeFretMappings", negativeFretMappings},
                      {"unplayableNotes", unplayableNotes}};
  return j.dump();
}

std::vector<NoteEvent> pairNotes(std::span<const RawEvent> events, const TempoMap& tempo,
                                 std::uint64_t endTick, IngestDiagnostics* diagnostics) {
  IngestDiagnostics local;
  IngestDiagnostics& diag = diagnostics ? *diagnostics : local;

  struct Open {
    std::uint64_t tick;
    int velocity;
  };
  std::map<std::pair<int, int>, std::deque<Open>> open;  // (channel, pitch)
  std::vector<NoteEvent> notes;

  auto emit = [&](int channel, int pitch, const Open& on, std::uint64_t offTick) {
    if (offTick <= on.tick) {
      ++diag.zeroLengthNotes;
      return;
    }
    NoteEvent n;
    n.pitch = pitch;
    n.channel = channel;
    n.velocity = on.velocity;
    n.onsetTick = on.tick;
    n.durationTicks = offTick - on.tick;
    n.onsetSeconds = ticksToSeconds(tempo, on.tick);
    n.durationSeconds = ticksToSeconds(tempo, offTick) - n.onsetSeconds;
    notes.push_back(n);
  };

  for (const auto& e : events) {
    if (!e.channel) continue;
    if (e.tick > endTick) endTick = e.tick;
    auto key = std::make_pair(*e.channel, e.pitch);
    if (e.kind == EventKind::NoteOn) {
      open[key].push_back({e.tick, e.velocity});
    } else if (e.kind == EventKind::NoteOff) {
      auto it = open.find(key);
      if (it == open.end() || it->second.empty()) {
        ++diag.orphanNoteOffs;
        continue;
      }
      Open on = it->second.front();
      it->second.pop_front();
      emit(key.first, key.second, on, e.tick);
    }
  }
  for (const auto& [key, queue] : open) {
    for (const auto& on : queue) {
      if (endTick > on.tick) ++diag.unclosedNotes;
      emit(key.first, key.second, on, endTick);
    }
  }

  std::sort(notes.begin(), notes.end(), [](const NoteEvent& a, const NoteEvent& b) {
    if (a.onsetTick != b.onsetTick) return a.onsetTick < b.onsetTick;
    if (a.pitch != b.pitch) return a.pitch < b.pitch;
    return a.channel < b.channel;
  });
  return notes;
}

std::vector<NoteEvent> pairNotes(const SmfContents& smf, IngestDiagnostics* diagnostics) {
  return pairNotes(smf.events, smf.tempo, smf.endTick, diagnostics);
}

ChannelMap defaultChannelMap(int stringCount) {
  ChannelMap m;
  for (int c = 0; c < std::min(stringCount, 16); ++c) m[c] = c + 1;
  return m;
}

std::optional<FretboardCoord> inferStringFret(const NoteEvent& note, const ChannelMap* channelMap,
                                              const Tuning& tuning, int fretCount,
                                              IngestDiagnostics* diagnostics) {
  IngestDiagnostics local;
  IngestDiagnostics& diag = diagnostics ? *diagnostics : local;

  if (channelMap) {
    if (auto it = channelMap->find(note.channel); it != channelMap->end()) {
      int string = it->second;
      if (string < 1 || string > tuning.stringCount()) {
        ++diag.unplayableNotes;
        return std::nullopt;
      }
      int fret = note.pitch - tuning.openPitch(string);
      if (fret < 0) {
        ++diag.negativeFretMappings;
        return std::nullopt;
      }
      if (fret > fretCount) {
        ++diag.unplayableNotes;
        return std::nullopt;
      }
      return FretboardCoord{string, fret};
    }
  }

  auto coords = coordsForPitch(tuning, note.pitch, fretCount);
  if (coords.empty()) {
    ++diag.unplayableNotes;
    return std::nullopt;
  }
  // Coordinates arrive ordered by string, so the first minimum wins ties.
  return *std::min_element(coords.begin(), coords.end(),
                           [](const FretboardCoord& a, const FretboardCoord& b) {
                             return a.fret < b.fret;
                           });
}

std::vector<NoteEvent> readNotes(std::span<const std::uint8_t> bytes, const ChannelMap* channelMap,
                                 const Tuning& tuning, int fretCount,
                                 IngestDiagnostics* diagnostics) {
  auto notes = pairNotes(parseSmf(bytes), diagnostics);
  for (auto& n : notes) n.coord = inferStringFret(n, channelMap, tuning, fretCount, diagnostics);
  return notes;
}

}  // namespace practice

#include "practice/smf_writer.h"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace practice::smf {

namespace {

struct Ev {
  std::uint64_t tick;
  int order;  // 0 tempo, 1 note off, 2 note on
  std::size_t seq;
  std::vector<std::uint8_t> bytes;  // status first
};

void put16(std::vector<std::uint8_t>& out, unsigned v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

std::vector<std::uint8_t> trackChunk(std::vector<Ev> events, bool runningStatus) {
  std::stable_sort(events.begin(), events.end(), [](const Ev& a, const Ev& b) {
    return std::tie(a.tick, a.order, a.seq) < std::tie(b.tick, b.order, b.seq);
  });
  std::vector<std::uint8_t> body;
  std::uint64_t now = 0;
  int lastStatus = -1;
  for (const auto& e : events) {
    std::uint64_t delta = e.tick - now;
    if (delta > 0x0FFFFFFF) throw std::invalid_argument("delta time exceeds 28 bits");
    now = e.tick;
    auto vlq = encodeVarLen(static_cast<std::uint32_t>(delta));
    body.insert(body.end(), vlq.begin(), vlq.end());
    const int status = e.bytes[0];
    const bool channelMessage = status < 0xF0;
    std::size_t from = 0;
    if (channelMessage && runningStatus && status == lastStatus) from = 1;
    body.insert(body.end(), e.bytes.begin() + static_cast<std::ptrdiff_t>(from), e.bytes.end());
    lastStatus = channelMessage ? status : -1;
  }
  body.insert(body.end(), {0x00, 0xFF, 0x2F, 0x00});

  std::vector<std::uint8_t> chunk = {'M', 'T', 'r', 'k'};
  put32(chunk, static_cast<std::uint32_t>(body.size()));
  chunk.insert(chunk.end(), body.begin(), body.end());
  return chunk;
}

}  // namespace

std::vector<std::uint8_t> encodeVarLen(std::uint32_t value) {
  if (value > 0x0FFFFFFF) throw std::invalid_argument("value exceeds 28 bits");
  std::vector<std::uint8_t> out{static_cast<std::uint8_t>(value & 0x7F)};
  while (value >>= 7) out.insert(out.begin(), static_cast<std::uint8_t>(0x80 | (value & 0x7F)));
  return out;
}

std::vector<std::uint8_t> writeSmf(const std::vector<EmitNote>& notes, const std::vector<EmitTempo>& tempos,
                                   const EmitOptions& options) {
  if (options.format != 0 && options.format != 1) throw std::invalid_argument("format must be 0 or 1");
  if (options.ppq <= 0 || options.ppq > 0x7FFF) throw std::invalid_argument("ppq out of range");

  std::vector<Ev> tempoEvents, noteEvents;
  for (std::size_t i = 0; i < tempos.size(); ++i) {
    const auto us = tempos[i].microsecondsPerQuarter;
    if (us == 0 || us > 0xFFFFFF) throw std::invalid_argument("tempo out of range");
    tempoEvents.push_back({tempos[i].tick, 0, i,
                           {0xFF, 0x51, 0x03, static_cast<std::uint8_t>(us >> 16),
                            static_cast<std::uint8_t>(us >> 8), static_cast<std::uint8_t>(us)}});
  }
  for (std::size_t i = 0; i < notes.size(); ++i) {
    const auto& n = notes[i];
    if (n.channel < 0 || n.channel > 15 || n.pitch < 0 || n.pitch > 127 || n.velocity < 1 ||
        n.velocity > 127 || n.offTick < n.onTick) {
      throw std::invalid_argument("note out of range");
    }
    const auto ch = static_cast<std::uint8_t>(n.channel);
    const auto pitch = static_cast<std::uint8_t>(n.pitch);
    noteEvents.push_back({n.onTick, 2, i, {static_cast<std::uint8_t>(0x90 | ch), pitch,
                                           static_cast<std::uint8_t>(n.velocity)}});
    if (options.velocityZeroNoteOff) {
      noteEvents.push_back({n.offTick, 1, i, {static_cast<std::uint8_t>(0x90 | ch), pitch, 0}});
    } else {
      noteEvents.push_back({n.offTick, 1, i, {static_cast<std::uint8_t>(0x80 | ch), pitch, 64}});
    }
  }

  std::vector<std::vector<std::uint8_t>> tracks;
  if (options.format == 0) {
    tempoEvents.insert(tempoEvents.end(), noteEvents.begin(), noteEvents.end());
    tracks.push_back(trackChunk(std::move(tempoEvents), options.runningStatus));
  } else {
    tracks.push_back(trackChunk(std::move(tempoEvents), options.runningStatus));
    tracks.push_back(trackChunk(std::move(noteEvents), options.runningStatus));
  }

  std::vector<std::uint8_t> out = {'M', 'T', 'h', 'd'};
  put32(out, 6);
  put16(out, static_cast<unsigned>(options.format));
  put16(out, static_cast<unsigned>(tracks.size()));
  put16(out, static_cast<unsigned>(options.ppq));
  for (const auto& t : tracks) out.insert(out.end(), t.begin(), t.end());
  return out;
}

}  // namespace practice::smf

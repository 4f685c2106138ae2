#pragma once

// Byte-level Standard MIDI File emitter. It shares no code with the parser so
// that round trips through the two are a real check. Used by the test suite
// and the sample-data generator only.

#include <cstdint>
#include <vector>

namespace practice::smf {

struct EmitNote {
  std::uint64_t onTick = 0;
  std::uint64_t offTick = 0;
  int pitch = 60;
  int velocity = 90;
  int channel = 0;
};

struct EmitTempo {
  std::uint64_t tick = 0;
  std::uint32_t microsecondsPerQuarter = 500000;
};

struct EmitOptions {
  int format = 1;  // 0: one track; 1: tempo track + note track
  int ppq = 480;
  bool runningStatus = true;
  bool velocityZeroNoteOff = false;  // emit offs as 0x9n with velocity 0
};

std::vector<std::uint8_t> encodeVarLen(std::uint32_t value);

std::vector<std::uint8_t> writeSmf(const std::vector<EmitNote>& notes,
                                   const std::vector<EmitTempo>& tempos,
                                   const EmitOptions& options = {});

}  // namespace practice::smf

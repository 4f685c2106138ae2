#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "practice/midi.h"
#include "practice/prng.h"
#include "practice/recording.h"
#include "practice/score.h"

namespace testsupport {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Score with quarter notes at beats 0, 1, 2, ...
practice::ReferenceScore quarterNoteScore(const std::vector<int>& pitches, double bpm = 120.0,
                                          const std::string& exercise = "ex");

/// Notes at the nominal score times, `copies` times back to back with one
/// beat of rest between passes.
practice::Recording performScore(const practice::ReferenceScore& score, int copies = 1,
                                 double startSeconds = 0.0);

practice::NoteEvent note(int pitch, double onset, double duration = 0.25, int channel = 0);

std::vector<std::uint8_t> readBytes(const std::filesystem::path& path);
std::string readText(const std::filesystem::path& path);

}  // namespace testsupport

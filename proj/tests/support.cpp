#include "support.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace testsupport {

namespace fs = std::filesystem;

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "practice-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

practice::ReferenceScore quarterNoteScore(const std::vector<int>& pitches, double bpm, const std::string& exercise) {
  practice::ReferenceScore s;
  s.exercise = exercise;
  s.referenceTempoBpm = bpm;
  for (std::size_t i = 0; i < pitches.size(); ++i) {
    s.notes.push_back({i, pitches[i], static_cast<double>(i), 1.0});
  }
  return s;
}

practice::Recording performScore(const practice::ReferenceScore& score, int copies, double startSeconds) {
  practice::Recording r;
  r.id = "perf";
  r.meta.exercise = score.exercise;
  const double spb = score.secondsPerBeat();
  const auto& last = score.notes.back();
  const double passBeats = last.onsetBeats + last.durationBeats + 1.0;
  for (int c = 0; c < copies; ++c) {
    for (const auto& n : score.notes) {
      r.notes.push_back(note(n.pitch, startSeconds + (c * passBeats + n.onsetBeats) * spb, n.durationBeats * spb * 0.9));
    }
  }
  return r;
}

practice::NoteEvent note(int pitch, double onset, double duration, int channel) {
  practice::NoteEvent n;
  n.pitch = pitch;
  n.onsetSeconds = onset;
  n.durationSeconds = duration;
  n.velocity = 80;
  n.channel = channel;
  return n;
}

std::vector<std::uint8_t> readBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string readText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testsupport

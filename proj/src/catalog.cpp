#include "practice/catalog.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <unistd.h>

#include "practice/api_error.h"
#include "practice/digest.h"
#include "practice/error.h"

namespace practice {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kIndexVersion = 1;

bool safeSegment(const std::string& s) {
  return !s.empty() && s != "." && s != ".." && s.find_first_of("/\\") == std::string::npos &&
         s.find('\0') == std::string::npos;
}

json channelMapJson(const ChannelMap& m) {
  json j = json::object();
  for (const auto& [ch, string] : m) j[std::to_string(ch)] = string;
  return j;
}

ChannelMap channelMapFrom(const json& j) {
  ChannelMap m;
  for (const auto& [key, value] : j.items()) m[std::stoi(key)] = value.get<int>();
  return m;
}

json entryJson(const CatalogEntry& e) {
  json j = {{"id", e.id},
            {"player", e.meta.player},
            {"exercise", e.meta.exercise},
            {"recordedAt", formatTimestamp(e.meta.recordedAt)},
            {"exerciseKind", std::string(toString(e.meta.exerciseKind))},
            {"file", e.file},
            {"digest", e.digest},
            {"noteCount", e.noteCount}};
  if (e.channelMap) j["channelMap"] = channelMapJson(*e.channelMap);
  return j;
}

CatalogEntry entryFrom(const json& j) {
  CatalogEntry e;
  e.id = j.at("id").get<std::string>();
  e.meta.player = j.at("player").get<std::string>();
  e.meta.exercise = j.at("exercise").get<std::string>();
  auto ts = parseTimestamp(j.at("recordedAt").get<std::string>());
  if (!ts) throw std::runtime_error("bad recordedAt in catalog");
  e.meta.recordedAt = *ts;
  auto kind = parseExerciseKind(j.at("exerciseKind").get<std::string>());
  if (!kind) throw std::runtime_error("bad exerciseKind in catalog");
  e.meta.exerciseKind = *kind;
  e.file = j.value("file", std::string{});
  e.digest = j.value("digest", std::string{});
  e.noteCount = j.value("noteCount", std::size_t{0});
  if (j.contains("channelMap")) e.channelMap = channelMapFrom(j.at("channelMap"));
  return e;
}

bool entryOrder(const CatalogEntry& a, const CatalogEntry& b) {
  return std::tie(a.meta.recordedAt, a.meta.player, a.meta.exercise) <
         std::tie(b.meta.recordedAt, b.meta.player, b.meta.exercise);
}

bool matches(const RecordingMeta& m, const RecordingFilter& f) {
  return (!f.player || m.player == *f.player) && (!f.exercise || m.exercise == *f.exercise) &&
         (!f.since || m.recordedAt >= *f.since) && (!f.until || m.recordedAt <= *f.until);
}

std::string recordingId(const RecordingMeta& m) {
  return sha256Hex(m.player + '\n' + m.exercise + '\n' + formatTimestamp(m.recordedAt)).substr(0, 16);
}

}  // namespace

void writeFileAtomically(const fs::path& path, std::string_view bytes) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::vector<std::uint8_t> readFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json toJson(const RecordingSummary& s) {
  return {{"id", s.id},
          {"player", s.meta.player},
          {"exercise", s.meta.exercise},
          {"recordedAt", formatTimestamp(s.meta.recordedAt)},
          {"exerciseKind", std::string(toString(s.meta.exerciseKind))},
          {"noteCount", s.noteCount}};
}

Catalog::Catalog(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
  loadIndex();
}

std::size_t Catalog::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void Catalog::loadIndex() {
  fs::path index = root_ / "index.json";
  std::vector<CatalogEntry> loaded;
  bool ok = false;
  if (fs::exists(index)) {
    try {
      auto bytes = readFileBytes(index);
      json j = json::parse(bytes.begin(), bytes.end());
      for (const auto& e : j.at("recordings")) loaded.push_back(entryFrom(e));
      ok = true;
    } catch (const std::exception&) {
      loaded.clear();
    }
  }
  if (!ok) {
    rebuildIndex();
    return;
  }
  std::erase_if(loaded, [&](const CatalogEntry& e) { return !fs::exists(root_ / e.file); });
  std::sort(loaded.begin(), loaded.end(), entryOrder);
  std::unique_lock lock(mutex_);
  entries_ = std::move(loaded);
}

void Catalog::rebuildIndex() {
  std::vector<CatalogEntry> found;
  fs::path players = root_ / "players";
  if (fs::exists(players)) {
    std::vector<fs::path> sidecars;
    for (const auto& item : fs::recursive_directory_iterator(players)) {
      if (item.is_regular_file() && item.path().extension() == ".json" &&
          item.path().string().find(".truth.json") == std::string::npos) {
        sidecars.push_back(item.path());
      }
    }
    std::sort(sidecars.begin(), sidecars.end());
    for (const auto& sidecar : sidecars) {
      fs::path midi = sidecar;
      midi.replace_extension(".mid");
      if (!fs::exists(midi)) continue;
      try {
        auto bytes = readFileBytes(sidecar);
        CatalogEntry e = entryFrom(json::parse(bytes.begin(), bytes.end()));
        auto midiBytes = readFileBytes(midi);
        e.file = fs::relative(midi, root_).generic_string();
        e.digest = sha256Hex(midiBytes);
        e.noteCount = parse(e, midiBytes).notes.size();
        found.push_back(std::move(e));
      } catch (const std::exception&) {
        // unreadable sidecar or file: not part of the catalog
      }
    }
  }
  std::sort(found.begin(), found.end(), entryOrder);
  writeIndex(found);
  std::unique_lock lock(mutex_);
  entries_ = std::move(found);
}

void Catalog::writeIndex(const std::vector<CatalogEntry>& entries) const {
  json list = json::array();
  for (const auto& e : entries) list.push_back(entryJson(e));
  json j = {{"version", kIndexVersion}, {"recordings", list}};
  writeFileAtomically(root_ / "index.json", j.dump(2) + "\n");
}

Recording Catalog::parse(const CatalogEntry& entry, std::span<const std::uint8_t> bytes) const {
  ChannelMap fallback = defaultChannelMap(tuning_.stringCount());
  const ChannelMap& map = entry.channelMap ? *entry.channelMap : fallback;
  Recording r;
  r.id = entry.id;
  r.meta = entry.meta;
  r.notes = readNotes(bytes, &map, tuning_, fretCount_);
  return r;
}

std::string Catalog::ingest(std::span<const std::uint8_t> midi, const RecordingMeta& meta,
                            const IngestOptions& options) {
  if (!safeSegment(meta.player) || !safeSegment(meta.exercise)) {
    throw ApiError(ApiErrorCode::BadRequest, "player and exercise must be nonempty names without path separators");
  }
  if (meta.recordedAt == Timestamp{}) throw ApiError(ApiErrorCode::BadRequest, "recordedAt is required");

  CatalogEntry e;
  e.meta = meta;
  e.id = recordingId(meta);
  e.channelMap = options.channelMap;
  try {
    e.noteCount = parse(e, midi).notes.size();
  } catch (const ParseError& err) {
    throw ApiError(ApiErrorCode::ParseFailure, err.what(), json{{"offset", err.offset()}});
  }
  e.digest = sha256Hex(midi);

  std::lock_guard writer(writerMutex_);
  std::vector<CatalogEntry> next;
  {
    std::shared_lock lock(mutex_);
    for (const auto& existing : entries_) {
      if (existing.meta.player == meta.player && existing.meta.exercise == meta.exercise &&
          existing.meta.recordedAt == meta.recordedAt) {
        throw ApiError(ApiErrorCode::Conflict, "recording already exists", json{{"id", existing.id}});
      }
    }
    next = entries_;
  }

  fs::path dir = fs::path("players") / meta.player / meta.exercise;
  std::string stem = formatTimestampCompact(meta.recordedAt);
  e.file = (dir / (stem + ".mid")).generic_string();
  writeFileAtomically(root_ / e.file,
                      std::string_view(reinterpret_cast<const char*>(midi.data()), midi.size()));
  if (faultHook_) faultHook_(IngestStage::RecordingWritten);
  writeFileAtomically(root_ / dir / (stem + ".json"), entryJson(e).dump(2) + "\n");
  if (faultHook_) faultHook_(IngestStage::SidecarWritten);

  next.push_back(e);
  std::sort(next.begin(), next.end(), entryOrder);
  writeIndex(next);
  if (faultHook_) faultHook_(IngestStage::IndexWritten);

  std::unique_lock lock(mutex_);
  entries_ = std::move(next);
  return e.id;
}

std::vector<RecordingSummary> Catalog::query(const RecordingFilter& filter) const {
  std::shared_lock lock(mutex_);
  std::vector<RecordingSummary> out;
  for (const auto& e : entries_) {
    if (matches(e.meta, filter)) out.push_back({e.id, e.meta, e.noteCount});
  }
  return out;
}

std::optional<CatalogEntry> Catalog::entry(const std::string& id) const {
  std::shared_lock lock(mutex_);
  for (const auto& e : entries_) {
    if (e.id == id) return e;
  }
  return std::nullopt;
}

std::vector<CatalogEntry> Catalog::entries() const {
  std::shared_lock lock(mutex_);
  return entries_;
}

Recording Catalog::loadRecording(const std::string& id) const {
  auto e = entry(id);
  if (!e) throw ApiError(ApiErrorCode::NotFound, "unknown recording", json{{"recording", id}});
  auto bytes = readFileBytes(root_ / e->file);
  std::string digest = sha256Hex(bytes);
  Recording r;
  try {
    r = parse(*e, bytes);
  } catch (const ParseError& err) {
    throw ApiError(ApiErrorCode::ParseFailure, err.what(), json{{"offset", err.offset()}, {"recording", id}});
  }
  if (digest != e->digest) {
    std::unique_lock lock(mutex_);
    for (auto& stored : entries_) {
      if (stored.id == id) {
        stored.digest = digest;
        stored.noteCount = r.notes.size();
      }
    }
  }
  return r;
}

std::vector<Recording> Catalog::loadRecordings(const RecordingFilter& filter) const {
  std::vector<Recording> out;
  for (const auto& s : query(filter)) out.push_back(loadRecording(s.id));
  return out;
}

std::string Catalog::currentDigest(const std::string& id) const {
  auto e = entry(id);
  if (!e) throw ApiError(ApiErrorCode::NotFound, "unknown recording", json{{"recording", id}});
  return sha256Hex(readFileBytes(root_ / e->file));
}

std::vector<std::string> Catalog::players() const {
  std::set<std::string> names;
  std::shared_lock lock(mutex_);
  for (const auto& e : entries_) names.insert(e.meta.player);
  return {names.begin(), names.end()};
}

std::vector<std::string> Catalog::exercises() const {
  std::set<std::string> names;
  {
    std::shared_lock lock(mutex_);
    for (const auto& e : entries_) names.insert(e.meta.exercise);
  }
  if (fs::exists(root_ / "scores")) {
    for (const auto& item : fs::directory_iterator(root_ / "scores")) {
      if (item.path().extension() == ".json") names.insert(item.path().stem().string());
    }
  }
  return {names.begin(), names.end()};
}

void Catalog::putScore(const ReferenceScore& score) {
  if (!safeSegment(score.exercise)) throw ApiError(ApiErrorCode::BadRequest, "bad exercise name");
  validateScore(score);
  std::lock_guard writer(writerMutex_);
  writeFileAtomically(root_ / "scores" / (score.exercise + ".json"), scoreToJson(score) + "\n");
}

std::optional<ReferenceScore> Catalog::score(const std::string& exercise) const {
  if (!safeSegment(exercise)) return std::nullopt;
  fs::path path = root_ / "scores" / (exercise + ".json");
  if (!fs::exists(path)) return std::nullopt;
  auto bytes = readFileBytes(path);
  return scoreFromJson(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void Catalog::putScaleSpec(const std::string& exercise, const ScaleSpec& spec) {
  if (!safeSegment(exercise)) throw ApiError(ApiErrorCode::BadRequest, "bad exercise name");
  validate(spec);
  std::lock_guard writer(writerMutex_);
  writeFileAtomically(root_ / "scales" / (exercise + ".json"), scaleSpecToJson(spec) + "\n");
}

ScaleSpec Catalog::scaleSpecFor(const std::string& exercise) const {
  if (safeSegment(exercise)) {
    fs::path path = root_ / "scales" / (exercise + ".json");
    if (fs::exists(path)) {
      auto bytes = readFileBytes(path);
      return scaleSpecFromJson(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    }
  }
  return ScaleSpec::aMinorPentatonicBlues();
}

}  // namespace practice

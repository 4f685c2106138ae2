#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "practice/midi.h"
#include "practice/recording.h"
#include "practice/score.h"
#include "practice/theory.h"

namespace practice {

struct CatalogEntry {
  std::string id;
  RecordingMeta meta;
  std::string file;  // relative to the catalog root
  std::string digest;
  std::size_t noteCount = 0;
  std::optional<ChannelMap> channelMap;
};

struct RecordingFilter {
  std::optional<std::string> player;
  std::optional<std::string> exercise;
  std::optional<Timestamp> since;  // inclusive
  std::optional<Timestamp> until;  // inclusive
};

struct RecordingSummary {
  std::string id;
  RecordingMeta meta;
  std::size_t noteCount = 0;
};

struct IngestOptions {
  std::optional<ChannelMap> channelMap;
};

/// Points inside ingestion where tests may inject a simulated crash.
enum class IngestStage { RecordingWritten, SidecarWritten, IndexWritten };

/// Directory-backed recording library:
///
///   <root>/index.json
///   <root>/players/<player>/<exercise>/<recordedAt>.mid   (+ .json sidecar)
///   <root>/scores/<exercise>.json
///   <root>/scales/<exercise>.json
///
/// The index is published by rename after the recording files, so readers
/// never see an entry whose files are missing. Many readers, one writer.
class Catalog {
 public:
  /// Creates the directory if needed. Loads index.json, or rescans when it is
  /// missing or unreadable. Entries whose files vanished are dropped.
  explicit Catalog(std::filesystem::path root);

  Catalog(const Catalog&) = delete;
  Catalog& operator=(const Catalog&) = delete;

  const std::filesystem::path& root() const noexcept { return root_; }
  std::size_t size() const;

  /// Returns the new recording id. Throws ApiError (badRequest, conflict,
  /// parseFailure).
  std::string ingest(std::span<const std::uint8_t> midi, const RecordingMeta& meta,
                     const IngestOptions& options = {});

  std::vector<RecordingSummary> query(const RecordingFilter& filter = {}) const;
  std::optional<CatalogEntry> entry(const std::string& id) const;
  std::vector<CatalogEntry> entries() const;

  /// Parses the stored file. A digest mismatch against the index (file edited
  /// out of band) is tolerated: the file is re-parsed and the in-memory entry
  /// refreshed. Throws ApiError notFound for unknown ids.
  Recording loadRecording(const std::string& id) const;
  std::vector<Recording> loadRecordings(const RecordingFilter& filter) const;
  /// Digest of the file as currently on disk.
  std::string currentDigest(const std::string& id) const;

  std::vector<std::string> players() const;
  std::vector<std::string> exercises() const;

  void putScore(const ReferenceScore& score);
  std::optional<ReferenceScore> score(const std::string& exercise) const;

  void putScaleSpec(const std::string& exercise, const ScaleSpec& spec);
  /// Falls back to the built-in A minor pentatonic blues spec.
  ScaleSpec scaleSpecFor(const std::string& exercise) const;

  const Tuning& tuning() const noexcept { return tuning_; }
  int fretCount() const noexcept { return fretCount_; }

  /// Discards the index and rebuilds it from the sidecars on disk.
  void rebuildIndex();

  void setFaultHook(std::function<void(IngestStage)> hook) { faultHook_ = std::move(hook); }

 private:
  void loadIndex();
  void writeIndex(const std::vector<CatalogEntry>& entries) const;
  Recording parse(const CatalogEntry& entry, std::span<const std::uint8_t> bytes) const;

  std::filesystem::path root_;
  Tuning tuning_ = Tuning::standardGuitar();
  int fretCount_ = kDefaultFretCount;
  std::function<void(IngestStage)> faultHook_;

  mutable std::shared_mutex mutex_;
  mutable std::vector<CatalogEntry> entries_;  // sorted by (recordedAt, player, exercise)
  std::mutex writerMutex_;
};

/// Writes `bytes` to `path` through a temporary file and rename.
void writeFileAtomically(const std::filesystem::path& path, std::string_view bytes);
std::vector<std::uint8_t> readFileBytes(const std::filesystem::path& path);

nlohmann::json toJson(const RecordingSummary& summary);

}  // namespace practice

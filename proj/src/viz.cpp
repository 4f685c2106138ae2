#include "practice/viz.h"

#include <algorithm>

#include "practice/api_error.h"
#include "practice/digest.h"
#include "practice/heatmaps.h"
#include "practice/json_io.h"
#include "practice/similarity.h"
#include "practice/theory.h"

namespace practice {

using nlohmann::json;

namespace {

std::vector<NoteEvent> allNotes(const std::vector<Recording>& recordings) {
  std::vector<NoteEvent> notes;
  for (const auto& r : recordings) notes.insert(notes.end(), r.notes.begin(), r.notes.end());
  return notes;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ApiError(ApiErrorCode::BadRequest, message);
}

}  // namespace

VizEngine::VizEngine(const Catalog& catalog, RenderOptions options)
    : catalog_(catalog), options_(std::move(options)) {}

std::size_t VizEngine::cacheSize() const {
  std::lock_guard lock(cacheMutex_);
  return cache_.size();
}

template <typename Compute>
std::string VizEngine::memo(const std::string& kind, const VizQuery& q,
                            const std::vector<Recording>& inputs, const std::string& extra,
                            Compute&& compute) {
  std::string key = sha256Hex(extra) + '|' + kind + '|' + q.recording + '|' + q.player + '|' + q.exercise + '|' + q.playerA +
                    '|' + q.playerB + '|' + std::string(toString(q.fit)) + '|' +
                    (q.format == VizFormat::Svg ? "svg" : "json");
  for (const auto& p : q.players) key += "|p:" + p;
  for (const auto& r : inputs) {
    auto e = catalog_.entry(r.id);
    key += "|" + r.id + ":" + (e ? e->digest : std::string{});
  }
  {
    std::lock_guard lock(cacheMutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  std::string body = compute();
  std::lock_guard lock(cacheMutex_);
  cache_.emplace(key, body);
  return body;
}

std::vector<Recording> VizEngine::recordingsFor(const std::string& player,
                                                const std::string& exercise) const {
  RecordingFilter f;
  f.player = player;
  f.exercise = exercise;
  auto recs = catalog_.loadRecordings(f);
  if (recs.empty()) {
    throw ApiError(ApiErrorCode::NotFound, "no recordings for player and exercise",
                   json{{"player", player}, {"exercise", exercise}});
  }
  return recs;
}

std::string VizEngine::progress(const VizQuery& q) {
  std::vector<Recording> recs;
  std::string exercise = q.exercise;
  if (!q.recording.empty()) {
    recs.push_back(catalog_.loadRecording(q.recording));
    exercise = recs.front().meta.exercise;
  } else {
    require(!q.player.empty() && !q.exercise.empty(), "progress needs recording or player and exercise");
    recs = recordingsFor(q.player, q.exercise);
  }
  auto score = catalog_.score(exercise);
  if (!score) throw ApiError(ApiErrorCode::NotFound, "no reference score for exercise", json{{"exercise", exercise}});
  return memo("progress", q, recs, scoreToJson(*score), [&] {
    ProgressMatrix m = progressMatrix(recs, *score, q.fit);
    if (q.format == VizFormat::Svg) return renderProgressHeatmap(m, options_);
    json j = toJson(m);
    j["fit"] = std::string(toString(q.fit));
    return j.dump();
  });
}

std::string VizEngine::fretboard(const VizQuery& q) {
  std::vector<Recording> recs;
  if (!q.recording.empty()) {
    recs.push_back(catalog_.loadRecording(q.recording));
  } else {
    require(!q.player.empty() && !q.exercise.empty(), "fretboard needs recording or player and exercise");
    recs = recordingsFor(q.player, q.exercise);
  }
  return memo("fretboard", q, recs, "", [&] {
    FretboardGrid g = fretboardCounts(allNotes(recs), catalog_.tuning().stringCount(), catalog_.fretCount());
    return q.format == VizFormat::Svg ? renderFretboard(g, options_) : toJson(g).dump();
  });
}

std::string VizEngine::compare(const VizQuery& q) {
  require(!q.playerA.empty() && !q.playerB.empty() && !q.exercise.empty(),
          "compare needs playerA, playerB and exercise");
  auto recsA = recordingsFor(q.playerA, q.exercise);
  auto recsB = recordingsFor(q.playerB, q.exercise);
  std::vector<Recording> inputs = recsA;
  inputs.insert(inputs.end(), recsB.begin(), recsB.end());
  return memo("compare", q, inputs, "", [&] {
    const int strings = catalog_.tuning().stringCount();
    ComparisonGrid c = comparisonGrid(fretboardCounts(allNotes(recsA), strings, catalog_.fretCount()),
                                      fretboardCounts(allNotes(recsB), strings, catalog_.fretCount()));
    if (q.format == VizFormat::Svg) return renderFretboard(c, options_);
    json j = toJson(c);
    j["playerA"] = q.playerA;
    j["playerB"] = q.playerB;
    return j.dump();
  });
}

std::string VizEngine::similarity(const VizQuery& q) {
  require(!q.exercise.empty(), "similarity needs exercise");
  RecordingFilter f;
  f.exercise = q.exercise;
  auto recs = catalog_.loadRecordings(f);
  if (recs.empty()) throw ApiError(ApiErrorCode::NotFound, "no recordings for exercise", json{{"exercise", q.exercise}});
  return memo("similarity", q, recs, "", [&] {
    std::vector<FretboardGrid> grids;
    std::vector<std::string> ids;
    for (const auto& r : recs) {
      grids.push_back(fretboardCounts(r.notes, catalog_.tuning().stringCount(), catalog_.fretCount()));
      ids.push_back(r.id);
    }
    Layout2D layout = similarityLayout(grids);
    return q.format == VizFormat::Svg ? renderSimilarityMap(layout, grids, options_, ids)
                                      : toJson(layout, ids).dump();
  });
}

std::string VizEngine::roles(const VizQuery& q) {
  require(!q.exercise.empty(), "roles needs exercise");
  RecordingFilter f;
  f.exercise = q.exercise;
  auto recs = catalog_.loadRecordings(f);
  if (!q.players.empty()) {
    std::erase_if(recs, [&](const Recording& r) {
      return std::find(q.players.begin(), q.players.end(), r.meta.player) == q.players.end();
    });
  }
  if (recs.empty()) throw ApiError(ApiErrorCode::NotFound, "no recordings for exercise", json{{"exercise", q.exercise}});
  ScaleSpec spec = catalog_.scaleSpecFor(q.exercise);
  return memo("roles", q, recs, scaleSpecToJson(spec), [&] {
    std::vector<RoleSequence> seqs;
    for (const auto& r : recs) seqs.push_back(roleSequence(r, spec));
    if (q.format == VizFormat::Svg) return renderRoleSequence(seqs, spec, options_);
    json list = json::array();
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      json s = toJson(seqs[i]);
      s["player"] = recs[i].meta.player;
      list.push_back(std::move(s));
    }
    return json{{"scale", toJson(spec)}, {"sequences", list}}.dump();
  });
}

}  // namespace practice

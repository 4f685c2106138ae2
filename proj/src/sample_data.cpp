#include "practice/sample_data.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "practice/prng.h"
#include "practice/smf_writer.h"
#include "practice/timestamp.h"

namespace practice {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

FretRegion regionFromJson(const json& j) {
  FretRegion r;
  auto strings = j.at("strings");
  auto frets = j.at("frets");
  r.firstString = strings.at(0).get<int>();
  r.lastString = strings.at(1).get<int>();
  r.firstFret = frets.at(0).get<int>();
  r.lastFret = frets.at(1).get<int>();
  r.weight = j.value("weight", 1.0);
  if (r.firstString > r.lastString || r.firstFret > r.lastFret || !(r.weight > 0.0)) {
    throw std::invalid_argument("invalid style region");
  }
  return r;
}

json regionToJson(const FretRegion& r) {
  return {{"strings", {r.firstString, r.lastString}}, {"frets", {r.firstFret, r.lastFret}}, {"weight", r.weight}};
}

// Exact conversion of a beat position to performed ticks.
std::int64_t beatsToTicks(double beats, double ticksPerBeat) {
  double t = beats * ticksPerBeat;
  double r = std::round(t);
  if (std::abs(t - r) > 1e-6) {
    throw std::invalid_argument("score position does not land on a whole tick at this tempo factor");
  }
  return static_cast<std::int64_t>(r);
}

// Fretboard position used to play a scored pitch: nearest to the anchor fret,
// lower string number on ties.
FretboardCoord chooseCoord(const Tuning& tuning, int pitch, double anchorFret) {
  auto coords = coordsForPitch(tuning, pitch, kDefaultFretCount);
  if (coords.empty()) throw std::invalid_argument("score pitch not playable on a standard guitar");
  return *std::min_element(coords.begin(), coords.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.fret - anchorFret) < std::abs(b.fret - anchorFret);
  });
}

struct Performance {
  std::vector<smf::EmitNote> notes;
  json truth;
};

// Per-note onset jitter in ticks, built from 3-note vectors orthogonal to
// both the constant and the beat regressor, so an offset or affine time map
// absorbs none of it. z holds one standard normal draw per interior note.
std::vector<std::int64_t> orthogonalJitter(const std::vector<std::int64_t>& q, const std::vector<double>& z,
                                           double amplitudeTicks, const std::optional<ProblemNote>& problem,
                                           double secondsPerTick) {
  const std::size_t m = q.size();
  std::vector<std::int64_t> jitter(m, 0);
  for (std::size_t k = 1; k + 1 < m; ++k) {
    std::int64_t a = q[k + 1] - q[k];
    std::int64_t b = q[k] - q[k - 1];
    if (a <= 0 || b <= 0) continue;
    const std::int64_t g = std::gcd(a, b);
    a /= g;
    b /= g;
    const double norm = std::sqrt(static_cast<double>(a * a + (a + b) * (a + b) + b * b));
    std::int64_t c = std::llround(z[k - 1] * amplitudeTicks / norm);
    if (problem && problem->index == k) {
      c += std::llround(-problem->offsetSeconds / secondsPerTick / static_cast<double>(a + b));
    }
    jitter[k - 1] += c * a;
    jitter[k] -= c * (a + b);
    jitter[k + 1] += c * b;
  }
  return jitter;
}

struct ScoredPlan {
  std::vector<std::int64_t> q;  // performed onset ticks relative to the repetition start
  double ticksPerBeat = 0.0;
  // An improving player keeps one timing habit that shrinks with every
  // repetition; otherwise every repetition draws fresh noise.
  std::optional<std::vector<double>> habit;
};

double amplitudeTicks(const PlayerSpec& player, int globalRep, double secondsPerTick) {
  return player.jitterStdDevSeconds * std::pow(player.improvementPerRepetition, globalRep) / secondsPerTick;
}

std::vector<double> drawNormals(std::size_t n, Xoshiro256& rng) {
  std::vector<double> z(n);
  for (auto& v : z) v = rng.gaussian();
  return z;
}

ScoredPlan planScore(const ReferenceScore& score, const PlayerSpec& player, int totalReps, Xoshiro256& rng,
                     double secondsPerTick) {
  ScoredPlan plan;
  plan.ticksPerBeat = kGeneratorPpq / player.tempoFactor;
  const std::size_t m = score.notes.size();
  for (const auto& n : score.notes) plan.q.push_back(beatsToTicks(n.onsetBeats, plan.ticksPerBeat));
  if (player.problemNote && (player.problemNote->index == 0 || player.problemNote->index + 1 >= m)) {
    throw std::invalid_argument("problem note needs a neighbour on each side");
  }
  if (player.improvementPerRepetition == 1.0 || m < 3) return plan;

  // Reject habits whose problem-note rows would mask the shrinking error in
  // the per-repetition mean |deviation|.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    auto z = drawNormals(m - 2, rng);
    double previous = std::numeric_limits<double>::infinity();
    bool improving = true;
    for (int r = 0; r < totalReps && improving; ++r) {
      auto j = orthogonalJitter(plan.q, z, amplitudeTicks(player, r, secondsPerTick), player.problemNote,
                                secondsPerTick);
      double mean = 0.0;
      for (auto v : j) mean += static_cast<double>(std::llabs(v));
      improving = mean < previous;
      previous = mean;
    }
    if (improving) {
      plan.habit = std::move(z);
      return plan;
    }
  }
  throw std::invalid_argument("improvement too small to show at tick resolution for " + player.name);
}

Performance performScore(const ReferenceScore& score, const PlayerSpec& player, const ScoredPlan& plan,
                         int session, int repetitions, Xoshiro256& rng, double secondsPerTick) {
  const std::size_t m = score.notes.size();
  const auto& last = score.notes.back();
  const std::int64_t repLength =
      beatsToTicks(std::ceil(last.onsetBeats + last.durationBeats) + 1.0, plan.ticksPerBeat);
  const std::int64_t leadIn = beatsToTicks(1.0, plan.ticksPerBeat);
  const double anchor = player.styleBias.empty()
                            ? 5.0
                            : 0.5 * (player.styleBias.front().firstFret + player.styleBias.front().lastFret);
  const Tuning tuning = Tuning::standardGuitar();

  Performance perf;
  perf.truth["secondsPerBeat"] = plan.ticksPerBeat * secondsPerTick;
  perf.truth["repetitions"] = json::array();
  for (int r = 0; r < repetitions; ++r) {
    const int globalRep = session * repetitions + r;
    const auto z = plan.habit ? *plan.habit : drawNormals(m >= 2 ? m - 2 : 0, rng);
    const auto jitter = orthogonalJitter(plan.q, z, amplitudeTicks(player, globalRep, secondsPerTick),
                                         player.problemNote, secondsPerTick);

    const std::int64_t start = leadIn + r * repLength;
    json js = json::array();
    for (std::size_t k = 0; k < m; ++k) {
      const std::int64_t on = start + plan.q[k] + jitter[k];
      if (on < 0) throw std::invalid_argument("jitter pushes a note before the file start");
      const auto& rn = score.notes[k];
      const std::int64_t dur =
          std::max<std::int64_t>(1, std::llround(rn.durationBeats * plan.ticksPerBeat * 0.9));
      const auto coord = chooseCoord(tuning, rn.pitch, anchor);
      perf.notes.push_back({static_cast<std::uint64_t>(on), static_cast<std::uint64_t>(on + dur), rn.pitch,
                            static_cast<int>(70 + rng.below(40)), coord.string - 1});
      js.push_back(static_cast<double>(jitter[k]) * secondsPerTick);
    }
    perf.truth["repetitions"].push_back({{"repetition", r}, {"jitterSeconds", js}});
  }
  return perf;
}

struct Candidate {
  FretboardCoord coord;
  int pitch;
};

std::vector<Candidate> regionCandidates(const FretRegion& region, const Tuning& tuning, const ScaleSpec& scale,
                                        bool blue) {
  std::vector<Candidate> out;
  for (int s = region.firstString; s <= region.lastString; ++s) {
    for (int f = region.firstFret; f <= region.lastFret; ++f) {
      const int pitch = pitchAt(tuning, {s, f});
      const NoteRole role = classifyNote(pitch, scale);
      const bool wanted = blue ? role == NoteRole::BlueNote : (role == NoteRole::Root || role == NoteRole::ScaleTone);
      if (wanted) out.push_back({{s, f}, pitch});
    }
  }
  return out;
}

// Improvisation: region-biased note choice, mostly eighths and quarters with
// an occasional short blue note.
Performance improvise(const PlayerSpec& player, const ScaleSpec& scale, int notes, bool withLongBlue,
                      double secondsPerBeat, Xoshiro256& rng, double secondsPerTick) {
  const Tuning tuning = Tuning::standardGuitar();
  std::vector<FretRegion> regions = player.styleBias;
  if (regions.empty()) regions.push_back({});
  double totalWeight = 0.0;
  for (const auto& r : regions) totalWeight += r.weight;

  const auto ticksPerBeat = static_cast<std::int64_t>(kGeneratorPpq);
  Performance perf;
  perf.truth["secondsPerBeat"] = secondsPerBeat;
  std::int64_t now = ticksPerBeat;
  const int longAt = notes / 2;
  for (int i = 0; i < notes; ++i) {
    double pick = rng.uniform() * totalWeight;
    std::size_t ri = 0;
    while (ri + 1 < regions.size() && pick >= regions[ri].weight) pick -= regions[ri++].weight;
    const FretRegion& region = regions[ri];

    const bool isLong = withLongBlue && i == longAt;
    const bool wantBlue = isLong || rng.uniform() < 0.08;
    auto cands = regionCandidates(region, tuning, scale, wantBlue);
    if (cands.empty() && isLong) {
      cands = regionCandidates({1, 6, 0, 12, 1.0}, tuning, scale, true);
    }
    if (cands.empty()) cands = regionCandidates(region, tuning, scale, false);
    if (cands.empty()) throw std::invalid_argument("style region holds no scale tones");
    const Candidate& c = cands[rng.below(cands.size())];

    std::int64_t dur = rng.uniform() < 0.5 ? ticksPerBeat / 2 : ticksPerBeat;
    if (wantBlue && !isLong) dur = ticksPerBeat / 2;
    if (isLong) {
      dur = std::llround(player.longBlueNoteSeconds / secondsPerTick);
      perf.truth["longBlueNote"] = {{"onsetSeconds", static_cast<double>(now) * secondsPerTick},
                                    {"durationSeconds", static_cast<double>(dur) * secondsPerTick},
                                    {"pitch", c.pitch}};
    }
    perf.notes.push_back({static_cast<std::uint64_t>(now), static_cast<std::uint64_t>(now + dur), c.pitch,
                          static_cast<int>(60 + rng.below(50)), c.coord.string - 1});
    now += dur;
  }
  return perf;
}

bool participates(const ExerciseSpec& ex, const std::string& player) {
  return ex.players.empty() || std::find(ex.players.begin(), ex.players.end(), player) != ex.players.end();
}

}  // namespace

GeneratorSpec generatorSpecFromJson(std::string_view text) {
  const json j = json::parse(text);
  GeneratorSpec spec;
  spec.seed = j.at("seed").get<std::uint64_t>();
  auto start = parseTimestamp(j.value("start", std::string("2024-01-08T18:00:00Z")));
  if (!start) throw std::invalid_argument("bad start timestamp");
  spec.start = *start;
  spec.sessionIntervalDays = j.value("sessionIntervalDays", 7);
  for (const auto& pj : j.at("players")) {
    PlayerSpec p;
    p.name = pj.at("name").get<std::string>();
    p.jitterStdDevSeconds = pj.value("jitterStdDevSeconds", 0.0);
    p.improvementPerRepetition = pj.value("improvementPerRepetition", 1.0);
    p.tempoFactor = pj.value("tempoFactor", 1.0);
    if (pj.contains("problemNote")) {
      p.problemNote = ProblemNote{pj["problemNote"].at("index").get<std::size_t>(),
                                  pj["problemNote"].at("offsetSeconds").get<double>()};
    }
    for (const auto& rj : pj.value("styleBias", json::array())) p.styleBias.push_back(regionFromJson(rj));
    p.longBlueNoteSeconds = pj.value("longBlueNoteSeconds", 0.0);
    if (pj.contains("sessions")) p.sessions = pj["sessions"].get<int>();
    if (!(p.tempoFactor > 0.0) || p.jitterStdDevSeconds < 0.0) throw std::invalid_argument("invalid player " + p.name);
    spec.players.push_back(std::move(p));
  }
  for (const auto& ej : j.at("exercises")) {
    ExerciseSpec e;
    e.name = ej.at("name").get<std::string>();
    auto kind = parseExerciseKind(ej.value("kind", std::string("scalePattern")));
    if (!kind) throw std::invalid_argument("unknown exercise kind for " + e.name);
    e.kind = *kind;
    if (ej.contains("score")) {
      json sj = ej["score"];
      sj["exercise"] = e.name;
      e.score = scoreFromJson(sj.dump());
    }
    if (ej.contains("scale")) e.scale = scaleSpecFromJson(ej["scale"].dump());
    e.repetitionsPerSession = ej.value("repetitionsPerSession", 1);
    e.sessions = ej.value("sessions", 1);
    e.notesPerRecording = ej.value("notesPerRecording", 32);
    e.players = ej.value("players", std::vector<std::string>{});
    if (e.kind != ExerciseKind::Improvisation && !e.score) throw std::invalid_argument(e.name + " needs a score");
    spec.exercises.push_back(std::move(e));
  }
  return spec;
}

std::string generatorSpecToJson(const GeneratorSpec& spec) {
  json j;
  j["seed"] = spec.seed;
  j["start"] = formatTimestamp(spec.start);
  j["sessionIntervalDays"] = spec.sessionIntervalDays;
  j["players"] = json::array();
  for (const auto& p : spec.players) {
    json pj = {{"name", p.name},
               {"jitterStdDevSeconds", p.jitterStdDevSeconds},
               {"improvementPerRepetition", p.improvementPerRepetition},
               {"tempoFactor", p.tempoFactor},
               {"styleBias", json::array()},
               {"longBlueNoteSeconds", p.longBlueNoteSeconds}};
    for (const auto& r : p.styleBias) pj["styleBias"].push_back(regionToJson(r));
    if (p.problemNote) pj["problemNote"] = {{"index", p.problemNote->index}, {"offsetSeconds", p.problemNote->offsetSeconds}};
    if (p.sessions) pj["sessions"] = *p.sessions;
    j["players"].push_back(std::move(pj));
  }
  j["exercises"] = json::array();
  for (const auto& e : spec.exercises) {
    json ej = {{"name", e.name},
               {"kind", std::string(toString(e.kind))},
               {"repetitionsPerSession", e.repetitionsPerSession},
               {"sessions", e.sessions},
               {"notesPerRecording", e.notesPerRecording},
               {"players", e.players}};
    if (e.score) {
      ej["score"] = json::parse(scoreToJson(*e.score));
      ej["score"].erase("exercise");
    }
    if (e.scale) ej["scale"] = json::parse(scaleSpecToJson(*e.scale));
    j["exercises"].push_back(std::move(ej));
  }
  return j.dump(2);
}

GeneratorSpec demoGeneratorSpec() {
  GeneratorSpec spec;
  spec.seed = 20240108;
  spec.start = *parseTimestamp("2024-01-08T18:00:00Z");
  spec.sessionIntervalDays = 14;

  // Hypothetical population. The box players share the fifth-position
  // pentatonic box; ben leans on the low strings, anna never touches them, and
  // eli plays a single take up the neck.
  const FretRegion box{1, 6, 5, 8, 1.0};
  spec.players = {
      {"teacher", 0.008, 1.0, 1.0, std::nullopt, {box}, 0.0, std::nullopt},
      {"student", 0.05, 0.7, 1.0, ProblemNote{5, 0.2}, {box}, 0.0, std::nullopt},
      {"rushing", 0.02, 1.0, 1.1, std::nullopt, {box}, 0.0, std::nullopt},
      {"anna", 0.03, 1.0, 1.0, std::nullopt, {{1, 4, 5, 8, 2.0}, {1, 3, 8, 10, 1.0}}, 0.0, std::nullopt},
      {"ben", 0.03, 1.0, 1.0, std::nullopt, {{4, 6, 3, 8, 2.0}, {1, 3, 5, 8, 1.0}}, 0.0, std::nullopt},
      {"cara", 0.03, 1.0, 1.0, std::nullopt, {box}, 2.0, std::nullopt},
      {"eli", 0.03, 1.0, 1.0, std::nullopt, {{1, 3, 12, 17, 1.0}}, 0.0, 1},
  };

  ExerciseSpec scale;
  scale.name = "pentatonic-box";
  scale.kind = ExerciseKind::ScalePattern;
  ReferenceScore s;
  s.exercise = scale.name;
  s.referenceTempoBpm = 120.0;
  const int pitches[] = {45, 48, 50, 52, 55, 57, 60, 62, 64, 67, 69, 72};
  for (std::size_t i = 0; i < std::size(pitches); ++i) {
    s.notes.push_back({i, pitches[i], static_cast<double>(i), 1.0});
  }
  scale.score = s;
  scale.repetitionsPerSession = 3;
  scale.sessions = 3;
  scale.players = {"teacher", "student", "rushing"};

  ExerciseSpec improv;
  improv.name = "blues-improv";
  improv.kind = ExerciseKind::Improvisation;
  improv.sessions = 2;
  improv.notesPerRecording = 64;
  improv.players = {"teacher", "anna", "ben", "cara", "eli"};

  spec.exercises = {scale, improv};
  return spec;
}

void generateCatalog(const GeneratorSpec& spec, const fs::path& outDir) {
  if (fs::exists(outDir) && !fs::is_empty(outDir)) {
    throw std::runtime_error("refusing to generate into non-empty directory " + outDir.string());
  }
  fs::create_directories(outDir);
  Catalog catalog(outDir);

  const ScaleSpec defaultScale = ScaleSpec::aMinorPentatonicBlues();
  for (std::size_t ei = 0; ei < spec.exercises.size(); ++ei) {
    const auto& ex = spec.exercises[ei];
    if (ex.kind != ExerciseKind::Improvisation && !ex.score) throw std::invalid_argument(ex.name + " needs a score");
    if (ex.score) catalog.putScore(*ex.score);
    if (ex.scale) catalog.putScaleSpec(ex.name, *ex.scale);
    const ScaleSpec& scale = ex.scale ? *ex.scale : defaultScale;
    const double refBpm = ex.score ? ex.score->referenceTempoBpm : 120.0;
    const auto usPerQuarter = static_cast<std::uint32_t>(std::llround(60e6 / refBpm));
    const double secondsPerTick = usPerQuarter / 1e6 / kGeneratorPpq;

    for (std::size_t pi = 0; pi < spec.players.size(); ++pi) {
      const auto& player = spec.players[pi];
      if (!participates(ex, player.name)) continue;
      // One stream per (exercise, player) so editing one player leaves the
      // others' recordings unchanged.
      Xoshiro256 rng(spec.seed ^ (0x9E3779B97F4A7C15ull * (ei * 1024 + pi + 1)));
      const int sessions = player.sessions.value_or(ex.sessions);
      std::optional<ScoredPlan> plan;
      if (ex.score) plan = planScore(*ex.score, player, sessions * ex.repetitionsPerSession, rng, secondsPerTick);
      for (int session = 0; session < sessions; ++session) {
        RecordingMeta meta{player.name, ex.name,
                           spec.start + std::chrono::days(spec.sessionIntervalDays * session) +
                               std::chrono::hours(static_cast<int>(pi)) + std::chrono::minutes(10 * static_cast<int>(ei)),
                           ex.kind};
        Performance perf =
            ex.kind == ExerciseKind::Improvisation
                ? improvise(player, scale, ex.notesPerRecording, session == 0 && player.longBlueNoteSeconds > 0.0,
                            60.0 / refBpm, rng, secondsPerTick)
                : performScore(*ex.score, player, *plan, session, ex.repetitionsPerSession, rng, secondsPerTick);

        smf::EmitOptions opts;
        opts.ppq = kGeneratorPpq;
        const auto bytes = smf::writeSmf(perf.notes, {{0, usPerQuarter}}, opts);
        const std::string id = catalog.ingest(bytes, meta);

        json truth = perf.truth;
        truth["recording"] = id;
        truth["player"] = player.name;
        truth["exercise"] = ex.name;
        truth["secondsPerTick"] = secondsPerTick;
        writeFileAtomically(truthPathFor(catalog, id), truth.dump(2) + "\n");
      }
    }
  }
}

fs::path truthPathFor(const Catalog& catalog, const std::string& recordingId) {
  auto e = catalog.entry(recordingId);
  if (!e) throw std::invalid_argument("unknown recording " + recordingId);
  return (catalog.root() / e->file).replace_extension(".truth.json");
}

RecordingTruth readTruth(const fs::path& truthFile) {
  std::ifstream in(truthFile);
  if (!in) throw std::runtime_error("cannot open " + truthFile.string());
  const json j = json::parse(in);
  RecordingTruth t;
  t.player = j.at("player").get<std::string>();
  t.exercise = j.at("exercise").get<std::string>();
  t.secondsPerBeat = j.at("secondsPerBeat").get<double>();
  for (const auto& r : j.value("repetitions", json::array())) {
    t.repetitions.push_back({r.at("repetition").get<std::size_t>(), r.at("jitterSeconds").get<std::vector<double>>()});
  }
  if (j.contains("longBlueNote")) t.longBlueNoteOnsetSeconds = j["longBlueNote"].at("onsetSeconds").get<double>();
  return t;
}

DemoQueries demoQueries() {
  DemoQueries q;
  q.progress.player = "student";
  q.progress.exercise = "pentatonic-box";
  q.compare.playerA = "ben";
  q.compare.playerB = "anna";
  q.compare.exercise = "blues-improv";
  q.similarity.exercise = "blues-improv";
  q.roles.exercise = "blues-improv";
  for (auto* v : {&q.progress, &q.compare, &q.similarity, &q.roles}) v->format = VizFormat::Svg;
  return q;
}

std::vector<fs::path> writeDemoFigures(const Catalog& catalog, const fs::path& outDir) {
  fs::create_directories(outDir);
  VizEngine engine(catalog);
  const DemoQueries q = demoQueries();
  std::vector<std::pair<std::string, std::string>> figures = {
      {"progress.svg", engine.progress(q.progress)},
      {"compare.svg", engine.compare(q.compare)},
      {"similarity.svg", engine.similarity(q.similarity)},
      {"roles.svg", engine.roles(q.roles)},
  };
  std::vector<fs::path> paths;
  for (const auto& [name, body] : figures) {
    paths.push_back(outDir / name);
    writeFileAtomically(paths.back(), body);
  }
  return paths;
}

}  // namespace practice

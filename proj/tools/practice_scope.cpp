// practice-scope: command-line front end to the catalog, renderers and API.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "practice/api_error.h"
#include "practice/catalog.h"
#include "practice/error.h"
#include "practice/sample_data.h"
#include "practice/service.h"
#include "practice/viz.h"

namespace fs = std::filesystem;
using namespace practice;

namespace {

std::string defaultRoot() {
  if (const char* env = std::getenv("PRACTICE_SCOPE_ROOT")) return env;
  return "practice-catalog";
}

void emit(const std::string& body, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << body;
    if (!body.empty() && body.back() != '\n') std::cout << '\n';
    return;
  }
  writeFileAtomically(out, body);
  std::cerr << "wrote " << out << '\n';
}

std::vector<std::string> splitCommas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guitar practice analytics: catalog, visualizations and HTTP API"};
  app.require_subcommand(1);
  std::string root = defaultRoot();
  app.add_option("--root", root, "Catalog root (default: $PRACTICE_SCOPE_ROOT)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Add a MIDI recording to the catalog");
  std::string file, player, exercise, recordedAt, kind = "scale";
  ingest->add_option("file", file, "Standard MIDI file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--player", player)->required();
  ingest->add_option("--exercise", exercise)->required();
  ingest->add_option("--recorded-at", recordedAt, "YYYY-MM-DDTHH:MM:SSZ")->required();
  ingest->add_option("--kind", kind, "scale, riff or improv")->check(CLI::IsMember({"scale", "riff", "improv"}));

  // add-score
  auto* addScore = app.add_subcommand("add-score", "Register a reference score (SMF or JSON)");
  std::string scoreFile, scoreExercise;
  addScore->add_option("file", scoreFile)->required()->check(CLI::ExistingFile);
  addScore->add_option("--exercise", scoreExercise, "Exercise name (default: file stem)");

  // list
  auto* list = app.add_subcommand("list", "List recordings");
  std::string listPlayer, listExercise;
  bool listJson = false;
  list->add_option("--player", listPlayer);
  list->add_option("--exercise", listExercise);
  list->add_flag("--json", listJson);

  // render
  auto* render = app.add_subcommand("render", "Render one visualization");
  std::string viz, out, recording, players, fit = "affine", format = "svg";
  render->add_option("viz", viz)->required()->check(
      CLI::IsMember({"progress", "fretboard", "compare", "similarity", "roles"}));
  render->add_option("--recording", recording);
  render->add_option("--player", player);
  render->add_option("--exercise", exercise);
  std::string playerA, playerB;
  render->add_option("--player-a", playerA);
  render->add_option("--player-b", playerB);
  render->add_option("--players", players, "Comma-separated list (roles)");
  render->add_option("--fit", fit)->check(CLI::IsMember({"none", "offset", "affine"}));
  render->add_option("--format", format)->check(CLI::IsMember({"svg", "json"}));
  render->add_option("-o,--output", out);

  // compare
  auto* compare = app.add_subcommand("compare", "Fretboard comparison of two players");
  compare->add_option("--a", playerA)->required();
  compare->add_option("--b", playerB)->required();
  compare->add_option("--exercise", exercise)->required();
  compare->add_option("-o,--output", out);

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  std::string bind = "127.0.0.1:8080";
  serve->add_option("--bind", bind, "host:port");

  // generate
  auto* generate = app.add_subcommand("generate", "Write a synthetic catalog from a generator spec");
  std::string specFile, outDir;
  bool printSpec = false;
  generate->add_option("--spec", specFile, "GeneratorSpec JSON (default: bundled demo)")->check(CLI::ExistingFile);
  generate->add_option("--out", outDir, "Output directory (absent or empty)");
  generate->add_flag("--print-demo-spec", printSpec, "Print the bundled demo spec and exit");

  // demo
  auto* demo = app.add_subcommand("demo", "Generate the demo catalog and its four figures");
  std::string demoOut = "demo";
  demo->add_option("--out", demoOut, "Directory for catalog/ and figures/");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      if (printSpec) {
        std::cout << generatorSpecToJson(demoGeneratorSpec()) << '\n';
        return 0;
      }
      if (outDir.empty()) outDir = root;
      GeneratorSpec spec = demoGeneratorSpec();
      if (!specFile.empty()) {
        std::ifstream in(specFile);
        std::stringstream ss;
        ss << in.rdbuf();
        spec = generatorSpecFromJson(ss.str());
      }
      generateCatalog(spec, outDir);
      std::cerr << "generated catalog in " << outDir << '\n';
      return 0;
    }
    if (*demo) {
      const fs::path base(demoOut);
      generateCatalog(demoGeneratorSpec(), base / "catalog");
      Catalog catalog(base / "catalog");
      for (const auto& p : writeDemoFigures(catalog, base / "figures")) std::cout << p.string() << '\n';
      return 0;
    }

    Catalog catalog(root);

    if (*ingest) {
      auto ts = parseTimestamp(recordedAt);
      if (!ts) throw ApiError(ApiErrorCode::BadRequest, "recorded-at must look like 2024-01-31T18:00:00Z");
      RecordingMeta meta{player, exercise, *ts, *parseExerciseKind(kind)};
      auto bytes = readFileBytes(file);
      std::cout << catalog.ingest(bytes, meta) << '\n';
    } else if (*addScore) {
      ScoreLoadOptions opts;
      opts.exercise = scoreExercise;
      catalog.putScore(loadScoreFile(scoreFile, opts));
    } else if (*list) {
      RecordingFilter f;
      if (!listPlayer.empty()) f.player = listPlayer;
      if (!listExercise.empty()) f.exercise = listExercise;
      auto rows = catalog.query(f);
      if (listJson) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) j.push_back(toJson(r));
        std::cout << j.dump(2) << '\n';
      } else {
        for (const auto& r : rows) {
          std::cout << r.id << "  " << formatTimestamp(r.meta.recordedAt) << "  " << r.meta.player << "  "
                    << r.meta.exercise << "  " << r.noteCount << " notes\n";
        }
      }
    } else if (*render || *compare) {
      VizEngine engine(catalog);
      VizQuery q;
      q.recording = recording;
      q.player = player;
      q.exercise = exercise;
      q.playerA = playerA;
      q.playerB = playerB;
      q.players = splitCommas(players);
      q.fit = *parseFitMode(fit);
      q.format = format == "json" ? VizFormat::Json : VizFormat::Svg;
      std::string body;
      if (*compare) body = engine.compare(q);
      else if (viz == "progress") body = engine.progress(q);
      else if (viz == "fretboard") body = engine.fretboard(q);
      else if (viz == "compare") body = engine.compare(q);
      else if (viz == "similarity") body = engine.similarity(q);
      else body = engine.roles(q);
      emit(body, out);
    } else if (*serve) {
      auto colon = bind.rfind(':');
      if (colon == std::string::npos) throw ApiError(ApiErrorCode::BadRequest, "--bind expects host:port");
      const std::string host = bind.substr(0, colon);
      const int port = std::stoi(bind.substr(colon + 1));
      ApiService service(catalog);
      std::cerr << "serving " << catalog.root().string() << " on http://" << bind << "/api\n";
      if (!service.serve(host, port)) {
        std::cerr << "cannot bind " << bind << '\n';
        return 1;
      }
    }
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.toJson() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#include "practice/service.h"

#include <sstream>

#include <httplib.h>

#include "practice/api_error.h"
#include "practice/error.h"

namespace practice {

using nlohmann::json;

struct ApiService::Server {
  httplib::Server http;
};

namespace {

constexpr std::string_view kSvgType = "image/svg+xml";
constexpr std::string_view kJsonType = "application/json; charset=utf-8";

std::optional<std::string> param(const HttpRequest& r, const std::string& name) {
  auto it = r.params.find(name);
  if (it == r.params.end()) return std::nullopt;
  return it->second;
}

std::string paramOr(const HttpRequest& r, const std::string& name) {
  return param(r, name).value_or(std::string{});
}

std::optional<Timestamp> timestampParam(const HttpRequest& r, const std::string& name) {
  auto v = param(r, name);
  if (!v) return std::nullopt;
  auto ts = parseTimestamp(*v);
  if (!ts) throw ApiError(ApiErrorCode::BadRequest, "malformed timestamp", json{{"param", name}, {"value", *v}});
  return ts;
}

std::vector<std::string> splitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

VizQuery vizQuery(const HttpRequest& r) {
  VizQuery q;
  q.recording = paramOr(r, "recording");
  q.player = paramOr(r, "player");
  q.exercise = paramOr(r, "exercise");
  q.playerA = paramOr(r, "playerA");
  q.playerB = paramOr(r, "playerB");
  q.players = splitList(paramOr(r, "players"));
  if (auto fit = param(r, "fit")) {
    auto mode = parseFitMode(*fit);
    if (!mode) throw ApiError(ApiErrorCode::BadRequest, "fit must be none, offset or affine");
    q.fit = *mode;
  }
  if (auto format = param(r, "format")) {
    if (*format == "svg") {
      q.format = VizFormat::Svg;
    } else if (*format != "json") {
      throw ApiError(ApiErrorCode::BadRequest, "format must be json or svg");
    }
  }
  return q;
}

HttpResponse jsonResponse(const json& body, int status = 200) {
  return {status, std::string(kJsonType), body.dump()};
}

}  // namespace

ApiService::ApiService(Catalog& catalog, RenderOptions options)
    : catalog_(catalog), viz_(catalog, std::move(options)), server_(std::make_shared<Server>()) {}

HttpResponse ApiService::handle(const HttpRequest& request) {
  try {
    return route(request);
  } catch (const ApiError& e) {
    return {httpStatus(e.code()), std::string(kJsonType), e.toJson()};
  } catch (const ValidationError& e) {
    ApiError err(ApiErrorCode::BadRequest, e.what());
    return {400, std::string(kJsonType), err.toJson()};
  } catch (const std::exception& e) {
    ApiError err(ApiErrorCode::Internal, e.what());
    return {500, std::string(kJsonType), err.toJson()};
  }
}

HttpResponse ApiService::route(const HttpRequest& r) {
  const std::string& path = r.path;
  if (path.rfind("/api/", 0) != 0) throw ApiError(ApiErrorCode::NotFound, "unknown endpoint", json{{"path", path}});
  const std::string rest = path.substr(5);

  if (r.method == "POST") {
    if (rest != "recordings") throw ApiError(ApiErrorCode::NotFound, "unknown endpoint", json{{"path", path}});
    auto file = r.formParts.find("file");
    auto metaPart = r.formParts.find("meta");
    if (file == r.formParts.end() || metaPart == r.formParts.end()) {
      throw ApiError(ApiErrorCode::BadRequest, "multipart body needs 'file' and 'meta' parts");
    }
    RecordingMeta meta;
    IngestOptions options;
    try {
      json m = json::parse(metaPart->second);
      meta.player = m.at("player").get<std::string>();
      meta.exercise = m.at("exercise").get<std::string>();
      auto ts = parseTimestamp(m.at("recordedAt").get<std::string>());
      if (!ts) throw ApiError(ApiErrorCode::BadRequest, "malformed recordedAt");
      meta.recordedAt = *ts;
      auto kind = parseExerciseKind(m.value("exerciseKind", std::string("scalePattern")));
      if (!kind) throw ApiError(ApiErrorCode::BadRequest, "unknown exerciseKind");
      meta.exerciseKind = *kind;
      if (m.contains("channelMap")) {
        ChannelMap cm;
        for (const auto& [k, v] : m.at("channelMap").items()) cm[std::stoi(k)] = v.get<int>();
        options.channelMap = cm;
      }
    } catch (const json::exception& e) {
      throw ApiError(ApiErrorCode::BadRequest, std::string("bad meta JSON: ") + e.what());
    }
    const auto& bytes = file->second;
    std::string id = catalog_.ingest(
        std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()), meta, options);
    return jsonResponse(json{{"id", id}}, 201);
  }
  if (r.method != "GET") throw ApiError(ApiErrorCode::BadRequest, "unsupported method", json{{"method", r.method}});

  if (rest == "players") return jsonResponse(catalog_.players());
  if (rest == "exercises") return jsonResponse(catalog_.exercises());
  if (rest == "recordings") {
    RecordingFilter f;
    if (auto p = param(r, "player")) f.player = *p;
    if (auto e = param(r, "exercise")) f.exercise = *e;
    f.since = timestampParam(r, "since");
    f.until = timestampParam(r, "until");
    json list = json::array();
    for (const auto& s : catalog_.query(f)) list.push_back(toJson(s));
    return jsonResponse(list);
  }
  if (rest.rfind("scores/", 0) == 0) {
    std::string exercise = rest.substr(7);
    auto score = catalog_.score(exercise);
    if (!score) throw ApiError(ApiErrorCode::NotFound, "no reference score for exercise", json{{"exercise", exercise}});
    return {200, std::string(kJsonType), scoreToJson(*score)};
  }
  if (rest.rfind("viz/", 0) == 0) {
    std::string kind = rest.substr(4);
    VizQuery q = vizQuery(r);
    std::string body;
    if (kind == "progress") {
      body = viz_.progress(q);
    } else if (kind == "fretboard") {
      body = viz_.fretboard(q);
    } else if (kind == "compare") {
      body = viz_.compare(q);
    } else if (kind == "similarity") {
      body = viz_.similarity(q);
    } else if (kind == "roles") {
      body = viz_.roles(q);
    } else {
      throw ApiError(ApiErrorCode::NotFound, "unknown visualization", json{{"viz", kind}});
    }
    return {200, std::string(q.format == VizFormat::Svg ? kSvgType : kJsonType), std::move(body)};
  }
  throw ApiError(ApiErrorCode::NotFound, "unknown endpoint", json{{"path", path}});
}

namespace {

HttpRequest fromHttplib(const httplib::Request& req) {
  HttpRequest r;
  r.method = req.method;
  r.path = req.path;
  for (const auto& [k, v] : req.params) r.params.emplace(k, v);
  for (const auto& [name, file] : req.files) r.formParts[name] = file.content;
  return r;
}

}  // namespace

static void install(httplib::Server& http, ApiService& service) {
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    HttpResponse out = service.handle(fromHttplib(req));
    res.status = out.status;
    res.set_content(out.body, out.contentType);
  };
  http.Get(".*", handler);
  http.Post(".*", handler);
}

bool ApiService::serve(const std::string& host, int port) {
  install(server_->http, *this);
  return server_->http.listen(host, port);
}

int ApiService::bindEphemeral(const std::string& host) {
  install(server_->http, *this);
  return server_->http.bind_to_any_port(host);
}

bool ApiService::listenAfterBind() { return server_->http.listen_after_bind(); }

void ApiService::stop() { server_->http.stop(); }

}  // namespace practice

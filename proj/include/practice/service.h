#pragma once

#include <map>
#include <memory>
#include <string>

#include "practice/catalog.h"
#include "practice/viz.h"

namespace practice {

struct HttpRequest {
  std::string method = "GET";
  std::string path;
  std::multimap<std::string, std::string> params;
  std::map<std::string, std::string> formParts;  // multipart field name -> content
};

struct HttpResponse {
  int status = 200;
  std::string contentType = "application/json; charset=utf-8";
  std::string body;
};

/// The HTTP JSON/SVG API over a catalog. `handle` is the whole routing and
/// error contract; `serve` only adapts it to a socket.
class ApiService {
 public:
  explicit ApiService(Catalog& catalog, RenderOptions options = {});

  HttpResponse handle(const HttpRequest& request);

  /// Blocks until stop() is called. Returns false if the address cannot be bound.
  bool serve(const std::string& host, int port);
  /// Binds to an ephemeral port; returns it, or -1.
  int bindEphemeral(const std::string& host);
  bool listenAfterBind();
  void stop();

 private:
  HttpResponse route(const HttpRequest& request);

  Catalog& catalog_;
  VizEngine viz_;
  struct Server;
  std::shared_ptr<Server> server_;
};

}  // namespace practice

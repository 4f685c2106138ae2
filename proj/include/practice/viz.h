#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "practice/alignment.h"
#include "practice/catalog.h"
#include "practice/render.h"

namespace practice {

enum class VizFormat { Json, Svg };

struct VizQuery {
  std::string recording;
  std::string player;
  std::string exercise;
  std::string playerA;
  std::string playerB;
  std::vector<std::string> players;
  FitMode fit = FitMode::Affine;
  VizFormat format = VizFormat::Json;
};

/// Resolves a query against the catalog and produces the JSON data or SVG of
/// one of the four visualizations. Results are memoised by (kind, query,
/// digests of the recordings involved). Throws ApiError.
class VizEngine {
 public:
  explicit VizEngine(const Catalog& catalog, RenderOptions options = {});

  std::string progress(const VizQuery& q);
  std::string fretboard(const VizQuery& q);
  std::string compare(const VizQuery& q);
  std::string similarity(const VizQuery& q);
  std::string roles(const VizQuery& q);

  std::size_t cacheSize() const;

 private:
  template <typename Compute>
  std::string memo(const std::string& kind, const VizQuery& q, const std::vector<Recording>& inputs,
                   const std::string& extra, Compute&& compute);
  std::vector<Recording> recordingsFor(const std::string& player, const std::string& exercise) const;

  const Catalog& catalog_;
  RenderOptions options_;
  mutable std::mutex cacheMutex_;
  std::map<std::string, std::string> cache_;
};

}  // namespace practice

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "practice/heatmaps.h"
#include "practice/kernels.h"

namespace practice {

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

/// Symmetric, zero-diagonal, finite, nonnegative.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// Throws ValidationError when any invariant fails.
  explicit DistanceMatrix(kernels::SquareMatrix values);
  static DistanceMatrix fromPoints(const std::vector<Point2D>& points);

  std::size_t size() const noexcept { return values_.n; }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  const kernels::SquareMatrix& values() const noexcept { return values_; }

 private:
  kernels::SquareMatrix values_;
};

/// Euclidean distance between L1-normalised count vectors.
double heatmapDistance(const FretboardGrid& a, const FretboardGrid& b);

/// All pairwise heatmap distances (OpenMP kernel).
DistanceMatrix distanceMatrix(const std::vector<FretboardGrid>& grids);

/// Torgerson scaling into two dimensions. Each axis is flipped so that its
/// largest-magnitude entry is positive (lowest index on ties).
std::vector<Point2D> classicalMds(const DistanceMatrix& d);

struct SmacofResult {
  std::vector<Point2D> points;
  double stress = 0.0;              // normalised
  std::vector<double> stressTrace;  // starting stress, then one per accepted iteration
  std::size_t iterations = 0;
};

struct SmacofOptions {
  double tolerance = 1e-6;
  std::size_t maxIterations = 300;
};

/// Normalised stress sum (d_ij - |x_i - x_j|)^2 / sum d_ij^2 over i<j; zero
/// when every target distance is zero.
double normalizedStress(const DistanceMatrix& d, const std::vector<Point2D>& points);

SmacofResult smacof(const DistanceMatrix& d, std::vector<Point2D> init,
                    const SmacofOptions& options = {});

struct GridCell {
  int row = 0;
  int col = 0;

  friend bool operator==(const GridCell&, const GridCell&) = default;
};

struct GridShape {
  int rows = 0;
  int cols = 0;
};

/// cols = ceil(sqrt(n)), rows = ceil(n / cols).
GridShape gridShapeFor(std::size_t n);

/// Points rescaled so their bounding box spans the grid's cell centres.
std::vector<Point2D> scaleToGrid(const std::vector<Point2D>& points, GridShape shape);

/// Squared distance from each scaled point to each cell centre, n x (rows*cols).
std::vector<std::vector<double>> snapCostMatrix(const std::vector<Point2D>& points);

/// Optimal injective cell assignment (Hungarian method).
std::vector<GridCell> snapToGrid(const std::vector<Point2D>& points);

/// Minimum-cost assignment of rows to distinct columns for an n x m cost
/// matrix with n <= m. Returns the column chosen for each row.
std::vector<std::size_t> solveAssignment(const std::vector<std::vector<double>>& cost);

inline constexpr std::size_t kDefaultOutlierNeighbours = 3;

/// Mean distance to the k nearest other items.
std::vector<double> outlierScores(const DistanceMatrix& d, std::size_t k = kDefaultOutlierNeighbours);

/// Tukey fence on outlier scores; never flags anything for n < 5.
std::vector<bool> detectOutliers(const DistanceMatrix& d, std::size_t k = kDefaultOutlierNeighbours);

struct Layout2D {
  std::vector<Point2D> points;
  double stress = 0.0;
  std::vector<GridCell> gridCells;
  std::vector<bool> outlierFlags;
  GridShape shape;
};

Layout2D similarityLayout(const DistanceMatrix& d, std::size_t k = kDefaultOutlierNeighbours);
Layout2D similarityLayout(const std::vector<FretboardGrid>& grids,
                          std::size_t k = kDefaultOutlierNeighbours);

/// {"points", "stress", "grid", "outliers"}
std::string layoutToJson(const Layout2D& layout);

}  // namespace practice

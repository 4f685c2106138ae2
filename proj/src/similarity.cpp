#include "practice/similarity.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <json.hpp>

#include "practice/error.h"
#include "practice/stats.h"

namespace practice {

namespace {

std::vector<double> normalizedCounts(const FretboardGrid& g) {
  std::vector<double> v(g.cellCount(), 0.0);
  double total = 0.0;
  for (auto c : g.counts) total += static_cast<double>(c);
  if (total > 0.0) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(g.counts[i]) / total;
  }
  return v;
}

kernels::Points2D flatten(const std::vector<Point2D>& pts) {
  kernels::Points2D out;
  out.reserve(pts.size() * 2);
  for (const auto& p : pts) {
    out.push_back(p.x);
    out.push_back(p.y);
  }
  return out;
}

std::vector<Point2D> unflatten(const kernels::Points2D& flat) {
  std::vector<Point2D> out(flat.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {flat[2 * i], flat[2 * i + 1]};
  return out;
}

double sumSquaredTargets(const DistanceMatrix& d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) s += d(i, j) * d(i, j);
  }
  return s;
}

}  // namespace

DistanceMatrix::DistanceMatrix(kernels::SquareMatrix values) : values_(std::move(values)) {
  const std::size_t n = values_.n;
  for (std::size_t i = 0; i < n; ++i) {
    if (values_(i, i) != 0.0) throw ValidationError("distance diagonal must be zero", {i});
    for (std::size_t j = 0; j < n; ++j) {
      double v = values_(i, j);
      if (!std::isfinite(v) || v < 0.0) throw ValidationError("distances must be finite and nonnegative", {i, j});
      if (v != values_(j, i)) throw ValidationError("distance matrix must be symmetric", {i, j});
    }
  }
}

DistanceMatrix DistanceMatrix::fromPoints(const std::vector<Point2D>& points) {
  auto flat = flatten(points);
  return DistanceMatrix(kernels::pairwiseEuclidean(flat, points.size(), 2));
}

double heatmapDistance(const FretboardGrid& a, const FretboardGrid& b) {
  if (!a.sameShape(b)) throw ContractViolation("heatmap distance needs grids of equal dimensions");
  auto va = normalizedCounts(a), vb = normalizedCounts(b);
  double s = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) s += (va[i] - vb[i]) * (va[i] - vb[i]);
  return std::sqrt(s);
}

DistanceMatrix distanceMatrix(const std::vector<FretboardGrid>& grids) {
  if (grids.empty()) return DistanceMatrix(kernels::SquareMatrix(0));
  const std::size_t dim = grids.front().cellCount();
  std::vector<double> rows;
  rows.reserve(grids.size() * dim);
  for (const auto& g : grids) {
    if (!g.sameShape(grids.front())) throw ContractViolation("grids differ in dimensions");
    auto v = normalizedCounts(g);
    rows.insert(rows.end(), v.begin(), v.end());
  }
  return DistanceMatrix(kernels::pairwiseEuclidean(rows, grids.size(), dim));
}

std::vector<Point2D> classicalMds(const DistanceMatrix& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  std::vector<Point2D> out(d.size());
  if (n < 2) return out;

  Eigen::MatrixXd sq(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double v = d(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      sq(i, j) = v * v;
    }
  }
  // -1/2 J D^2 J with J = I - 11'/n, done by subtracting row/column means.
  Eigen::VectorXd rowMean = sq.rowwise().mean();
  double grand = rowMean.mean();
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      b(i, j) = -0.5 * (sq(i, j) - rowMean(i) - rowMean(j) + grand);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  const auto& values = eig.eigenvalues();  // ascending
  const auto& vectors = eig.eigenvectors();

  for (int axis = 0; axis < 2 && axis < n; ++axis) {
    Eigen::Index k = n - 1 - axis;
    double scale = std::sqrt(std::max(values(k), 0.0));
    Eigen::VectorXd col = vectors.col(k) * scale;
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (std::abs(col(i)) > std::abs(col(pivot))) pivot = i;
    }
    if (col(pivot) < 0.0) col = -col;
    for (Eigen::Index i = 0; i < n; ++i) {
      double v = col(i) == 0.0 ? 0.0 : col(i);  // no negative zero
      if (axis == 0) {
        out[static_cast<std::size_t>(i)].x = v;
      } else {
        out[static_cast<std::size_t>(i)].y = v;
      }
    }
  }
  return out;
}

double normalizedStress(const DistanceMatrix& d, const std::vector<Point2D>& points) {
  if (points.size() != d.size()) throw ContractViolation("point count differs from matrix size");
  double denom = sumSquaredTargets(d);
  if (denom == 0.0) return 0.0;
  return kernels::rawStress(d.values(), flatten(points)) / denom;
}

SmacofResult smacof(const DistanceMatrix& d, std::vector<Point2D> init, const SmacofOptions& options) {
  if (init.size() != d.size()) throw ContractViolation("initial layout size differs from matrix size");
  SmacofResult r;
  if (sumSquaredTargets(d) == 0.0) {
    r.points.assign(d.size(), Point2D{});
    r.stressTrace.push_back(0.0);
    return r;
  }
  const double denom = sumSquaredTargets(d);
  kernels::Points2D x = flatten(init);
  double stress = kernels::rawStress(d.values(), x) / denom;
  r.stressTrace.push_back(stress);
  for (std::size_t it = 0; it < options.maxIterations; ++it) {
    kernels::Points2D next = kernels::guttmanTransform(d.values(), x);
    double nextStress = kernels::rawStress(d.values(), next) / denom;
    if (nextStress > stress) break;
    x = std::move(next);
    r.stressTrace.push_back(nextStress);
    ++r.iterations;
    double decrease = stress - nextStress;
    stress = nextStress;
    if (decrease < options.tolerance) break;
  }
  r.points = unflatten(x);
  r.stress = stress;
  return r;
}

GridShape gridShapeFor(std::size_t n) {
  if (n == 0) return {0, 0};
  int cols = 1;
  while (static_cast<std::size_t>(cols) * static_cast<std::size_t>(cols) < n) ++cols;
  int rows = static_cast<int>((n + static_cast<std::size_t>(cols) - 1) / static_cast<std::size_t>(cols));
  return {rows, cols};
}

std::vector<Point2D> scaleToGrid(const std::vector<Point2D>& points, GridShape shape) {
  if (points.empty()) return {};
  double minX = points[0].x, maxX = points[0].x, minY = points[0].y, maxY = points[0].y;
  for (const auto& p : points) {
    minX = std::min(minX, p.x);
    maxX = std::max(maxX, p.x);
    minY = std::min(minY, p.y);
    maxY = std::max(maxY, p.y);
  }
  auto rescale = [](double v, double lo, double hi, int cells) {
    if (hi <= lo) return cells / 2.0;
    return 0.5 + (v - lo) / (hi - lo) * (cells - 1);
  };
  std::vector<Point2D> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    out.push_back({rescale(p.x, minX, maxX, shape.cols), rescale(p.y, minY, maxY, shape.rows)});
  }
  return out;
}

std::vector<std::vector<double>> snapCostMatrix(const std::vector<Point2D>& points) {
  GridShape shape = gridShapeFor(points.size());
  auto scaled = scaleToGrid(points, shape);
  const auto cells = static_cast<std::size_t>(shape.rows * shape.cols);
  std::vector<std::vector<double>> cost(points.size(), std::vector<double>(cells));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t c = 0; c < cells; ++c) {
      double cx = static_cast<double>(c % static_cast<std::size_t>(shape.cols)) + 0.5;
      double cy = static_cast<double>(c / static_cast<std::size_t>(shape.cols)) + 0.5;
      double dx = scaled[i].x - cx, dy = scaled[i].y - cy;
      cost[i][c] = dx * dx + dy * dy;
    }
  }
  return cost;
}

std::vector<std::size_t> solveAssignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) return {};
  const std::size_t m = cost.front().size();
  if (m < n) throw ContractViolation("assignment needs at least as many columns as rows");
  constexpr double inf = std::numeric_limits<double>::infinity();

  // Shortest augmenting paths with row/column potentials, 1-based with a
  // sentinel column 0.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = owner[j0], j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> result(n);
  for (std::size_t j = 1; j <= m; ++j) {
    if (owner[j] != 0) result[owner[j] - 1] = j - 1;
  }
  return result;
}

std::vector<GridCell> snapToGrid(const std::vector<Point2D>& points) {
  if (points.empty()) return {};
  GridShape shape = gridShapeFor(points.size());
  auto columns = solveAssignment(snapCostMatrix(points));
  std::vector<GridCell> out;
  out.reserve(points.size());
  for (auto c : columns) {
    out.push_back({static_cast<int>(c / static_cast<std::size_t>(shape.cols)),
                   static_cast<int>(c % static_cast<std::size_t>(shape.cols))});
  }
  return out;
}

std::vector<double> outlierScores(const DistanceMatrix& d, std::size_t k) {
  const std::size_t n = d.size();
  std::vector<double> scores(n, 0.0);
  if (n < 2 || k == 0) return scores;
  const std::size_t kk = std::min(k, n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> others;
    others.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(d(i, j));
    }
    std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(kk), others.end());
    double s = 0.0;
    for (std::size_t t = 0; t < kk; ++t) s += others[t];
    scores[i] = s / static_cast<double>(kk);
  }
  return scores;
}

std::vector<bool> detectOutliers(const DistanceMatrix& d, std::size_t k) {
  const std::size_t n = d.size();
  std::vector<bool> flags(n, false);
  if (n < 5) return flags;
  auto scores = outlierScores(d, k);
  double q1 = quantile(scores, 0.25), q3 = quantile(scores, 0.75);
  double fence = q3 + 1.5 * (q3 - q1);
  for (std::size_t i = 0; i < n; ++i) flags[i] = scores[i] > fence;
  return flags;
}

Layout2D similarityLayout(const DistanceMatrix& d, std::size_t k) {
  Layout2D layout;
  layout.shape = gridShapeFor(d.size());
  if (d.size() == 0) return layout;
  auto fit = smacof(d, classicalMds(d));
  layout.points = std::move(fit.points);
  layout.stress = fit.stress;
  layout.gridCells = snapToGrid(layout.points);
  layout.outlierFlags = detectOutliers(d, k);
  return layout;
}

Layout2D similarityLayout(const std::vector<FretboardGrid>& grids, std::size_t k) {
  return similarityLayout(distanceMatrix(grids), k);
}

std::string layoutToJson(const Layout2D& layout) {
  nlohmann::json points = nlohmann::json::array(), grid = nlohmann::json::array(),
                 outliers = nlohmann::json::array();
  for (const auto& p : layout.points) points.push_back({p.x, p.y});
  for (const auto& c : layout.gridCells) grid.push_back({c.row, c.col});
  for (bool f : layout.outlierFlags) outliers.push_back(f);
  nlohmann::json j = {{"points", points}, {"stress", layout.stress}, {"grid", grid}, {"outliers", outliers}};
  return j.dump();
}

}  // namespace practice

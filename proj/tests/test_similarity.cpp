#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include <json.hpp>

#include "oracles.h"
#include "practice/error.h"
#include "practice/heatmaps.h"
#include "practice/prng.h"
#include "practice/similarity.h"
#include "practice/stats.h"
#include "support.h"

using namespace practice;

namespace {

FretboardGrid singleCell(int string, int fret, std::size_t count = 1) {
  FretboardGrid g;
  g.at(string, fret) = count;
  g.totalNotes = count;
  return g;
}

FretboardGrid randomGrid(Xoshiro256& rng) {
  FretboardGrid g;
  for (auto& c : g.counts) {
    if (rng.uniform() < 0.2) c = rng.below(10);
  }
  return g;
}

double dist(Point2D a, Point2D b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<Point2D> randomPoints(Xoshiro256& rng, std::size_t n) {
  std::vector<Point2D> p(n);
  for (auto& q : p) q = {rng.uniform() * 10 - 5, rng.uniform() * 10 - 5};
  return p;
}

DistanceMatrix matrixOf(const std::vector<std::vector<double>>& rows) {
  kernels::SquareMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return DistanceMatrix(m);
}

DistanceMatrix tetrahedron() {
  const double a = 1.0;
  return matrixOf({{0, a, a, a}, {a, 0, a, a}, {a, a, 0, a}, {a, a, a, 0}});
}

}  // namespace

TEST(HeatmapDistance, IdenticalIsZero) {
  Xoshiro256 rng(1);
  auto g = randomGrid(rng);
  EXPECT_EQ(heatmapDistance(g, g), 0.0);
}

TEST(HeatmapDistance, DistinctSingleCellsAreRootTwo) {
  EXPECT_DOUBLE_EQ(heatmapDistance(singleCell(1, 0), singleCell(6, 12, 4)), std::sqrt(2.0));
}

TEST(HeatmapDistance, ScaledCopyIsZero) {
  Xoshiro256 rng(2);
  auto g = randomGrid(rng);
  auto h = g;
  for (auto& c : h.counts) c *= 3;
  EXPECT_NEAR(heatmapDistance(g, h), 0.0, 1e-15);
}

TEST(HeatmapDistance, EmptyGridIsZeroVector) {
  EXPECT_DOUBLE_EQ(heatmapDistance(FretboardGrid{}, singleCell(2, 2)), 1.0);
  EXPECT_EQ(heatmapDistance(FretboardGrid{}, FretboardGrid{}), 0.0);
}

TEST(HeatmapDistance, DimensionMismatch) {
  EXPECT_THROW(heatmapDistance(FretboardGrid(6, 22), FretboardGrid(6, 21)), ContractViolation);
}

TEST(HeatmapDistance, MetricPropertiesOnRandomGrids) {
  Xoshiro256 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = randomGrid(rng), b = randomGrid(rng), c = randomGrid(rng);
    double ab = heatmapDistance(a, b), ba = heatmapDistance(b, a);
    EXPECT_GE(ab, 0.0);
    EXPECT_EQ(ab, ba);
    EXPECT_LE(heatmapDistance(a, c), ab + heatmapDistance(b, c) + 1e-12);
  }
}

TEST(DistanceMatrix, RejectsBrokenInvariants) {
  EXPECT_THROW(matrixOf({{0, 1}, {2, 0}}), ValidationError);
  EXPECT_THROW(matrixOf({{1, 1}, {1, 0}}), ValidationError);
  EXPECT_THROW(matrixOf({{0, -1}, {-1, 0}}), ValidationError);
  EXPECT_THROW(matrixOf({{0, NAN}, {NAN, 0}}), ValidationError);
}

TEST(DistanceMatrix, GridsMatchPairwiseDistance) {
  Xoshiro256 rng(5);
  std::vector<FretboardGrid> grids;
  for (int i = 0; i < 7; ++i) grids.push_back(randomGrid(rng));
  auto d = distanceMatrix(grids);
  for (std::size_t i = 0; i < grids.size(); ++i) {
    for (std::size_t j = 0; j < grids.size(); ++j) EXPECT_NEAR(d(i, j), heatmapDistance(grids[i], grids[j]), 1e-15);
  }
}

TEST(ClassicalMds, TwoPointsThreeApart) {
  auto p = classicalMds(matrixOf({{0, 3}, {3, 0}}));
  EXPECT_NEAR(dist(p[0], p[1]), 3.0, 1e-12);
}

TEST(ClassicalMds, SinglePointAtOrigin) {
  auto p = classicalMds(matrixOf({{0}}));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].x, 0.0);
  EXPECT_EQ(p[0].y, 0.0);
}

TEST(ClassicalMds, EquilateralTriangle) {
  auto p = classicalMds(matrixOf({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) EXPECT_NEAR(dist(p[i], p[j]), 1.0, 1e-9);
  }
}

TEST(ClassicalMds, RecoversPlanarConfigurations) {
  Xoshiro256 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    auto pts = randomPoints(rng, 8);
    auto d = DistanceMatrix::fromPoints(pts);
    auto p = classicalMds(d);
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(dist(p[i], p[j]), d(i, j), 1e-9);
    }
  }
}

TEST(ClassicalMds, SignConventionLargestEntryPositive) {
  Xoshiro256 rng(7);
  auto p = classicalMds(DistanceMatrix::fromPoints(randomPoints(rng, 6)));
  auto biggest = [&](auto get) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
      if (std::abs(get(p[i])) > std::abs(get(p[k]))) k = i;
    }
    return get(p[k]);
  };
  EXPECT_GT(biggest([](Point2D q) { return q.x; }), 0.0);
  EXPECT_GT(biggest([](Point2D q) { return q.y; }), 0.0);
}

TEST(ClassicalMds, DeterministicUnderRelabelRoundTrip) {
  Xoshiro256 rng(8);
  auto pts = randomPoints(rng, 7);
  auto d = DistanceMatrix::fromPoints(pts);
  std::vector<std::size_t> perm(7);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::swap(perm[1], perm[4]);
  kernels::SquareMatrix pm(7);
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 7; ++j) pm(i, j) = d(perm[i], perm[j]);
  }
  auto a = classicalMds(d);
  auto b = classicalMds(DistanceMatrix(pm));
  // Unrelabel b and compare as configurations: same pairwise distances.
  std::vector<Point2D> back(7);
  for (std::size_t i = 0; i < 7; ++i) back[perm[i]] = b[i];
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 7; ++j) EXPECT_NEAR(dist(back[i], back[j]), dist(a[i], a[j]), 1e-9);
  }
  auto again = classicalMds(d);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(again[i].x, a[i].x);
    EXPECT_EQ(again[i].y, a[i].y);
  }
}

TEST(Smacof, EmbeddableStressNearZero) {
  Xoshiro256 rng(9);
  auto d = DistanceMatrix::fromPoints(randomPoints(rng, 8));
  auto r = smacof(d, classicalMds(d));
  EXPECT_LT(r.stress, 1e-9);
  EXPECT_NEAR(r.stress, normalizedStress(d, r.points), 1e-15);
}

TEST(Smacof, SinglePoint) {
  auto r = smacof(matrixOf({{0}}), {{0, 0}});
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_EQ(r.stress, 0.0);
}

TEST(Smacof, AllZeroMatrixCollapsesToOrigin) {
  auto r = smacof(matrixOf({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}), {{1, 2}, {3, 4}, {5, 6}});
  EXPECT_EQ(r.stress, 0.0);
  for (const auto& p : r.points) {
    EXPECT_EQ(p.x, 0.0);
    EXPECT_EQ(p.y, 0.0);
  }
}

TEST(Smacof, TetrahedronPositiveNonIncreasingStress) {
  auto d = tetrahedron();
  auto r = smacof(d, classicalMds(d));
  EXPECT_GT(r.stress, 0.0);
  ASSERT_GE(r.stressTrace.size(), 1u);
  for (std::size_t i = 1; i < r.stressTrace.size(); ++i) EXPECT_LE(r.stressTrace[i], r.stressTrace[i - 1]);
  EXPECT_EQ(r.stressTrace.back(), r.stress);
}

TEST(Smacof, RandomNonEmbeddableTracesNonIncreasing) {
  Xoshiro256 rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + rng.below(6);
    kernels::SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = 0.1 + rng.uniform();
    }
    DistanceMatrix d(m);
    std::vector<Point2D> init = randomPoints(rng, n);
    auto r = smacof(d, init);
    for (std::size_t i = 1; i < r.stressTrace.size(); ++i) ASSERT_LE(r.stressTrace[i], r.stressTrace[i - 1]);
    EXPECT_LE(r.iterations, 300u);
  }
}

TEST(GridShape, CeilSqrtColumns) {
  EXPECT_EQ(gridShapeFor(1).cols, 1);
  EXPECT_EQ(gridShapeFor(1).rows, 1);
  EXPECT_EQ(gridShapeFor(4).cols, 2);
  EXPECT_EQ(gridShapeFor(5).cols, 3);
  EXPECT_EQ(gridShapeFor(5).rows, 2);
  EXPECT_EQ(gridShapeFor(10).cols, 4);
  EXPECT_EQ(gridShapeFor(10).rows, 3);
  for (std::size_t n = 1; n < 200; ++n) {
    auto s = gridShapeFor(n);
    EXPECT_GE(static_cast<std::size_t>(s.cols * s.cols), n);
    EXPECT_LT(static_cast<std::size_t>((s.cols - 1) * (s.cols - 1)), n);
    EXPECT_GE(static_cast<std::size_t>(s.rows * s.cols), n);
    EXPECT_LT(static_cast<std::size_t>((s.rows - 1) * s.cols), n);
  }
}

TEST(SnapToGrid, SinglePoint) {
  auto cells = snapToGrid({{3.0, -2.0}});
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0], (GridCell{0, 0}));
}

TEST(SnapToGrid, PointsOnCellCentresKeepIdentity) {
  auto cells = snapToGrid({{0.5, 0.5}, {1.5, 0.5}, {0.5, 1.5}, {1.5, 1.5}});
  EXPECT_EQ(cells, (std::vector<GridCell>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}

TEST(SnapToGrid, OptimalAgainstFactorialSearch) {
  Xoshiro256 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    auto pts = randomPoints(rng, n);
    auto shape = gridShapeFor(n);
    auto scaled = scaleToGrid(pts, shape);
    std::vector<Point2D> centres;
    for (int r = 0; r < shape.rows; ++r) {
      for (int c = 0; c < shape.cols; ++c) centres.push_back({c + 0.5, r + 0.5});
    }
    auto cells = snapToGrid(pts);
    double cost = 0.0;
    std::set<std::pair<int, int>> distinct;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = scaled[i].x - (cells[i].col + 0.5), dy = scaled[i].y - (cells[i].row + 0.5);
      cost += dx * dx + dy * dy;
      distinct.insert({cells[i].row, cells[i].col});
    }
    EXPECT_EQ(distinct.size(), n);
    EXPECT_NEAR(cost, oracle::bruteForceSnapCost(scaled, centres), 1e-12);
  }
}

TEST(SolveAssignment, RectangularAgainstBruteForce) {
  Xoshiro256 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(5), m = n + rng.below(3);
    std::vector<std::vector<double>> cost(n, std::vector<double>(m));
    for (auto& row : cost) {
      for (auto& v : row) v = static_cast<double>(rng.below(20));
    }
    auto assign = solveAssignment(cost);
    double got = 0.0;
    for (std::size_t i = 0; i < n; ++i) got += cost[i][assign[i]];
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
      double c = 0.0;
      for (std::size_t i = 0; i < n; ++i) c += cost[i][perm[i]];
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_EQ(got, best);
  }
}

TEST(Outliers, EquidistantFlagsNone) {
  kernels::SquareMatrix m(8);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) m(i, j) = i == j ? 0.0 : 1.0;
  }
  for (bool f : detectOutliers(DistanceMatrix(m))) EXPECT_FALSE(f);
}

TEST(Outliers, ClusterPlusFarPoint) {
  Xoshiro256 rng(13);
  std::vector<Point2D> pts;
  for (int i = 0; i < 9; ++i) pts.push_back({rng.uniform() * 0.5, rng.uniform() * 0.5});
  pts.push_back({10.0 * std::sqrt(0.5), 0.0});  // ten cluster diameters away at most
  pts.back().x += 10.0;
  auto flags = detectOutliers(DistanceMatrix::fromPoints(pts));
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(flags[i], i == 9) << i;
}

TEST(Outliers, SmallNNeverFlags) {
  auto flags = detectOutliers(DistanceMatrix::fromPoints({{0, 0}, {0, 1}, {100, 100}}));
  for (bool f : flags) EXPECT_FALSE(f);
  auto four = detectOutliers(DistanceMatrix::fromPoints({{0, 0}, {0, 1}, {1, 0}, {100, 100}}));
  for (bool f : four) EXPECT_FALSE(f);
}

TEST(Outliers, ScoresAreMeanOfKNearest) {
  auto d = DistanceMatrix::fromPoints({{0, 0}, {1, 0}, {3, 0}, {6, 0}, {10, 0}});
  auto s = outlierScores(d, 2);
  EXPECT_DOUBLE_EQ(s[0], (1.0 + 3.0) / 2);
  EXPECT_DOUBLE_EQ(s[2], (2.0 + 3.0) / 2);
  EXPECT_DOUBLE_EQ(s[4], (4.0 + 7.0) / 2);
  auto capped = outlierScores(DistanceMatrix::fromPoints({{0, 0}, {2, 0}}), 3);
  EXPECT_DOUBLE_EQ(capped[0], 2.0);
}

TEST(Quantile, Type7Interpolation) {
  std::vector<double> v = {4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile(v, 0.75), 3.25);
  EXPECT_DOUBLE_EQ(quantile({5.0}, 0.95), 5.0);
}

TEST(Layout, InjectiveCellsAndJson) {
  Xoshiro256 rng(14);
  std::vector<FretboardGrid> grids;
  for (int i = 0; i < 10; ++i) grids.push_back(randomGrid(rng));
  auto layout = similarityLayout(grids);
  EXPECT_EQ(layout.shape.cols, 4);
  std::set<std::pair<int, int>> cells;
  for (const auto& c : layout.gridCells) {
    EXPECT_LT(c.col, layout.shape.cols);
    EXPECT_LT(c.row, layout.shape.rows);
    cells.insert({c.row, c.col});
  }
  EXPECT_EQ(cells.size(), 10u);
  EXPECT_NEAR(layout.stress, normalizedStress(distanceMatrix(grids), layout.points), 1e-15);
  auto j = nlohmann::json::parse(layoutToJson(layout));
  EXPECT_EQ(j.at("points").size(), 10u);
  EXPECT_EQ(j.at("grid").size(), 10u);
  EXPECT_EQ(j.at("outliers").size(), 10u);
  EXPECT_TRUE(j.at("stress").is_number());
}

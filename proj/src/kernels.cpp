#include "practice/kernels.h"

#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace practice::kernels {

namespace {

inline double rowDistance(std::span<const double> rows, std::size_t dim, std::size_t i,
                          std::size_t j) {
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    double d = rows[i * dim + k] - rows[j * dim + k];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double pointDistance(const Points2D& x, std::size_t i, std::size_t j) {
  double dx = x[2 * i] - x[2 * j];
  double dy = x[2 * i + 1] - x[2 * j + 1];
  return std::sqrt(dx * dx + dy * dy);
}

inline void guttmanRow(const SquareMatrix& target, const Points2D& x, std::size_t i,
                       Points2D& out) {
  const std::size_t n = target.n;
  double bii = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    double dij = pointDistance(x, i, j);
    double bij = dij > 0.0 ? -target(i, j) / dij : 0.0;
    bii -= bij;
    sx += bij * x[2 * j];
    sy += bij * x[2 * j + 1];
  }
  out[2 * i] = (sx + bii * x[2 * i]) / static_cast<double>(n);
  out[2 * i + 1] = (sy + bii * x[2 * i + 1]) / static_cast<double>(n);
}

inline double stressRow(const SquareMatrix& target, const Points2D& x, std::size_t i) {
  double s = 0.0;
  for (std::size_t j = i + 1; j < target.n; ++j) {
    double r = target(i, j) - pointDistance(x, i, j);
    s += r * r;
  }
  return s;
}

}  // namespace

SquareMatrix pairwiseEuclidean(std::span<const double> rows, std::size_t n, std::size_t dim) {
  SquareMatrix d(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
    auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = rowDistance(rows, dim, i, j);
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

SquareMatrix pairwiseEuclideanSerial(std::span<const double> rows, std::size_t n, std::size_t dim) {
  SquareMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = rowDistance(rows, dim, i, j);
    }
  }
  return d;
}

Points2D guttmanTransform(const SquareMatrix& target, const Points2D& points) {
  Points2D out(points.size(), 0.0);
  const auto count = static_cast<std::ptrdiff_t>(target.n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) guttmanRow(target, points, static_cast<std::size_t>(i), out);
  return out;
}

Points2D guttmanTransformSerial(const SquareMatrix& target, const Points2D& points) {
  Points2D out(points.size(), 0.0);
  for (std::size_t i = 0; i < target.n; ++i) guttmanRow(target, points, i, out);
  return out;
}

double rawStress(const SquareMatrix& target, const Points2D& points) {
  std::vector<double> partial(target.n, 0.0);
  const auto count = static_cast<std::ptrdiff_t>(target.n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    partial[static_cast<std::size_t>(i)] = stressRow(target, points, static_cast<std::size_t>(i));
  }
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

double rawStressSerial(const SquareMatrix& target, const Points2D& points) {
  double s = 0.0;
  for (std::size_t i = 0; i < target.n; ++i) s += stressRow(target, points, i);
  return s;
}

int threadCount() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace practice::kernels

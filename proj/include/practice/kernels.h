#pragma once

// Data-parallel inner loops of the similarity layout. Each kernel has an
// OpenMP version and a plain serial reference; tests pin them against each
// other and bench/ compares their speed. Reductions are accumulated per row
// and summed in index order, so results do not depend on the thread count.

#include <cstddef>
#include <span>
#include <vector>

namespace practice::kernels {

/// Row-major n x n matrix.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  explicit SquareMatrix(std::size_t n = 0) : n(n), values(n * n, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return values[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

/// Row-major n x 2 coordinates.
using Points2D = std::vector<double>;

/// Euclidean distances between rows of a row-major `n x dim` matrix.
SquareMatrix pairwiseEuclidean(std::span<const double> rows, std::size_t n, std::size_t dim);
SquareMatrix pairwiseEuclideanSerial(std::span<const double> rows, std::size_t n, std::size_t dim);

/// One unweighted SMACOF update X <- B(X) X / n.
Points2D guttmanTransform(const SquareMatrix& target, const Points2D& points);
Points2D guttmanTransformSerial(const SquareMatrix& target, const Points2D& points);

/// Raw stress sum over i<j of (target_ij - |x_i - x_j|)^2.
double rawStress(const SquareMatrix& target, const Points2D& points);
double rawStressSerial(const SquareMatrix& target, const Points2D& points);

/// Number of threads OpenMP would use (1 when built without OpenMP).
int threadCount();

}  // namespace practice::kernels

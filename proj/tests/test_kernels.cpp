#include <gtest/gtest.h>

#include "practice/kernels.h"
#include "practice/prng.h"

using namespace practice;
using namespace practice::kernels;

namespace {

std::vector<double> randomRows(Xoshiro256& rng, std::size_t n, std::size_t dim) {
  std::vector<double> v(n * dim);
  for (auto& x : v) x = rng.uniform();
  return v;
}

}  // namespace

TEST(Kernels, PairwiseParallelEqualsSerial) {
  Xoshiro256 rng(1);
  for (std::size_t n : {1u, 2u, 17u, 64u}) {
    auto rows = randomRows(rng, n, 138);
    auto a = pairwiseEuclidean(rows, n, 138);
    auto b = pairwiseEuclideanSerial(rows, n, 138);
    EXPECT_EQ(a.values, b.values);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(a(i, i), 0.0);
      for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(a(i, j), a(j, i));
    }
  }
}

TEST(Kernels, GuttmanParallelEqualsSerial) {
  Xoshiro256 rng(2);
  for (std::size_t n : {1u, 3u, 40u}) {
    SquareMatrix target(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) target(i, j) = target(j, i) = rng.uniform();
    }
    auto pts = randomRows(rng, n, 2);
    EXPECT_EQ(guttmanTransform(target, pts), guttmanTransformSerial(target, pts));
    EXPECT_EQ(rawStress(target, pts), rawStressSerial(target, pts));
  }
}

TEST(Kernels, RawStressZeroForExactDistances) {
  std::vector<double> pts = {0, 0, 3, 4, 6, 8};
  auto d = pairwiseEuclideanSerial(pts, 3, 2);
  EXPECT_EQ(d(0, 1), 5.0);
  EXPECT_EQ(rawStress(d, pts), 0.0);
}

TEST(Kernels, ThreadCountPositive) { EXPECT_GE(threadCount(), 1); }

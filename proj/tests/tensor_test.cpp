#include <gtest/gtest.h>

#include <cmath>

#include "sleepbench/errors.hpp"
#include "sleepbench/numarray.hpp"
#include "sleepbench/rng.hpp"
#include "testutil.hpp"

using namespace sleepbench;

TEST(NumArray, ShapeInvariants) {
  EXPECT_THROW(NumArray({2, 3}, std::vector<double>(5)), ShapeError);
  EXPECT_THROW(NumArray::zeros({0, 3}), ShapeError);
  EXPECT_THROW(NumArray::zeros({2, 3, 4, 5}), ShapeError);
  EXPECT_THROW(NumArray::zeros({}), ShapeError);
  const NumArray a = NumArray::zeros({2, 3, 4});
  EXPECT_EQ(a.rank(), 3u);
  EXPECT_EQ(a.size(), 24u);
}

TEST(NumArray, RowMajorIndexingRoundTrip) {
  const std::size_t r = 4, c = 5;
  NumArray a = NumArray::zeros({r, c});
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) a.at(i, j) = static_cast<double>(i * 100 + j);
  }
  // Element (i,j) of an [r,c] array is data[i*c + j].
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      EXPECT_EQ(a.flat()[i * c + j], static_cast<double>(i * 100 + j));
      EXPECT_EQ(a.at(i, j), a.flat()[i * c + j]);
    }
  }
  NumArray b = NumArray::zeros({2, 3, 4});
  b.at(1, 2, 3) = 7.0;
  EXPECT_EQ(b.flat()[(1 * 3 + 2) * 4 + 3], 7.0);
}

TEST(Matmul, IdentityCase) {
  const NumArray eye({2, 2}, {1, 0, 0, 1});
  const NumArray m({2, 2}, {5, 6, 7, 8});
  const NumArray out = matmul(eye, m);
  EXPECT_EQ(out.flat()[0], 5);
  EXPECT_EQ(out.flat()[1], 6);
  EXPECT_EQ(out.flat()[2], 7);
  EXPECT_EQ(out.flat()[3], 8);
}

TEST(Matmul, RowColumnCase) {
  const NumArray row({1, 2}, {1, 2});
  const NumArray col({2, 1}, {3, 4});
  const NumArray out = matmul(row, col);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.at(0, 0), 11.0);
}

TEST(Matmul, MatchesTripleLoopOracle) {
  Rng rng(99);
  const NumArray a = testutil::random_array(rng, {4, 3});
  const NumArray b = testutil::random_array(rng, {3, 2});
  const NumArray out = matmul(a, b);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      double acc = 0;
      for (std::size_t k = 0; k < 3; ++k) acc += a.at(i, k) * b.at(k, j);
      EXPECT_NEAR(out.at(i, j), acc, 1e-12);
    }
  }
}

TEST(Matmul, ShapeMismatchNamesBothShapes) {
  const NumArray a = NumArray::zeros({2, 3});
  const NumArray b = NumArray::zeros({2, 3});
  try {
    matmul(a, b);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("[2, 3]"), std::string::npos) << msg;
  }
}

TEST(Matmul, AssociativityOnSmallArrays) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const NumArray a = testutil::random_array(rng, {3, 4});
    const NumArray b = testutil::random_array(rng, {4, 2});
    const NumArray c = testutil::random_array(rng, {2, 5});
    const NumArray left = matmul(matmul(a, b), c);
    const NumArray right = matmul(a, matmul(b, c));
    ASSERT_TRUE(left.same_shape(right));
    for (std::size_t i = 0; i < left.size(); ++i) {
      EXPECT_NEAR(left.flat()[i], right.flat()[i], 1e-9);
    }
  }
}

TEST(Transpose, SwapsIndices) {
  const NumArray a({2, 3}, {1, 2, 3, 4, 5, 6});
  const NumArray t = transpose(a);
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t.cols(), 2u);
  EXPECT_EQ(t.at(2, 1), a.at(1, 2));
}

TEST(Rng, DeterministicPerSeed) {
  Rng a(42), b(42);
  const NumArray x = rand_uniform(a, {4, 4}, 0, 1);
  const NumArray y = rand_uniform(b, {4, 4}, 0, 1);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x.flat()[i], y.flat()[i]);

  Rng c(43);
  const NumArray z = rand_uniform(c, {4, 4}, 0, 1);
  bool any_diff = false;
  for (std::size_t i = 0; i < x.size(); ++i) any_diff |= x.flat()[i] != z.flat()[i];
  EXPECT_TRUE(any_diff);
}

TEST(Rng, UniformRangeAndShape) {
  Rng rng(5);
  const NumArray a = rand_uniform(rng, {2, 3}, 0, 1);
  EXPECT_EQ(a.size(), 6u);
  for (double v : a.flat()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Rng, UniformMeanLawOfLargeNumbers) {
  Rng rng(2024);
  const NumArray a = rand_uniform(rng, {10000}, 0, 1);
  double mean = 0;
  for (double v : a.flat()) mean += v;
  mean /= static_cast<double>(a.size());
  EXPECT_NEAR(mean, 0.5, 0.02);
}

TEST(Rng, RejectsBadRange) {
  Rng rng(1);
  EXPECT_THROW(rand_uniform(rng, {2}, 1.0, 1.0), ParamError);
  EXPECT_THROW(rand_uniform(rng, {2}, 2.0, 1.0), ParamError);
}

TEST(Rng, MixedStreamsDiffer) {
  const std::uint64_t a = Rng::mix(1, 0);
  const std::uint64_t b = Rng::mix(1, 1);
  const std::uint64_t c = Rng::mix(2, 0);
  EXPECT_NE(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(a, Rng::mix(1, 0));
}

TEST(Rng, GaussianMoments) {
  Rng rng(77);
  double mean = 0, var = 0;
  const int n = 20000;
  std::vector<double> xs(n);
  for (double& x : xs) x = rng.next_gaussian();
  for (double x : xs) mean += x;
  mean /= n;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= n;
  EXPECT_NEAR(mean, 0.0, 0.03);
  EXPECT_NEAR(var, 1.0, 0.05);
}

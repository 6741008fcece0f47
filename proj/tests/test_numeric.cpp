#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dilated/numeric.hpp"
#include "dilated/linalg.hpp"

using namespace dilated;

TEST(PairwiseSum, MatchesExactSumOfSmallIntegers) {
  std::vector<double> v(10000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(pairwise_sum(v), 49995000.0);
}

TEST(PairwiseSum, EmptyIsZero) { EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0); }

TEST(FitLine, RecoversExactLine) {
  std::vector<double> x, y;
  for (int i = 0; i < 20; ++i) {
    x.push_back(i);
    y.push_back(-1.5 * i + 3.0);
  }
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, -1.5, 1e-13);
  EXPECT_NEAR(f.intercept, 3.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-13);
}

TEST(BinomialTable, PascalValues) {
  BinomialTable b(60, 8);
  EXPECT_EQ(b(10, 3), 120u);
  EXPECT_EQ(b(60, 8), 2558620845u);
  EXPECT_EQ(b(3, 5), 0u);
}

TEST(KroneckerSequence, PointsStayInUnitInterval) {
  KroneckerSequence s(4);
  for (std::size_t i = 0; i < 1000; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_GE(s(i, j), 0.0);
      EXPECT_LT(s(i, j), 1.0);
    }
}

TEST(Linalg, HermitianExtremesOfDiagonal) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 2.0;
  m(1, 1) = -1.0;
  m(2, 2) = 5.0;
  const auto ex = hermitian_extremes(m);
  EXPECT_DOUBLE_EQ(ex.min, -1.0);
  EXPECT_DOUBLE_EQ(ex.max, 5.0);
}

TEST(Linalg, GeneralizedEigenvalueOfScaledIdentity) {
  Matrix g = Matrix::Identity(4, 4) * 2.0;
  Matrix a = Matrix::Identity(4, 4) * 6.0;
  EXPECT_NEAR(largest_generalized_eigenvalue(a, g), 3.0, 1e-12);
}

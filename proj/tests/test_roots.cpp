#include <gtest/gtest.h>

#include <random>

#include "dilated/roots.hpp"

using namespace dilated;

TEST(ClassifyRoots, OuterRoot) {
  const auto c = classify_roots({2.0, -1.0});
  ASSERT_EQ(c.roots.size(), 1u);
  EXPECT_EQ(c.roots[0].tag, ModulusClass::Outer);
  EXPECT_NEAR(std::abs(c.roots[0].location - cplx(2.0)), 0.0, 1e-14);
  ASSERT_TRUE(c.delta);
  EXPECT_NEAR(*c.delta, 0.5, 1e-14);
  EXPECT_FALSE(c.kappa_star);
}

TEST(ClassifyRoots, InnerRoot) {
  const auto c = classify_roots({1.0, -2.0});
  ASSERT_EQ(c.roots.size(), 1u);
  EXPECT_EQ(c.roots[0].tag, ModulusClass::Inner);
  EXPECT_NEAR(c.roots[0].location.real(), 0.5, 1e-14);
}

TEST(ClassifyRoots, DoubleUnitRootAndOuterRoot) {
  // (1-z)^2 (2-z)
  const auto c = classify_roots({2.0, -5.0, 4.0, -1.0});
  EXPECT_EQ(c.total_multiplicity(), 3);
  const auto unit = c.with_tag(ModulusClass::Unit);
  ASSERT_EQ(unit.size(), 1u);
  EXPECT_EQ(unit[0].multiplicity, 2);
  EXPECT_NEAR(std::abs(unit[0].location - cplx(1.0)), 0.0, 1e-8);
  EXPECT_EQ(c.with_tag(ModulusClass::Outer).size(), 1u);
  EXPECT_FALSE(c.kappa_star);
}

TEST(ClassifyRoots, KappaStarForPureUnitRoots) {
  // (1-z)^3
  const auto c = classify_roots({1.0, -3.0, 3.0, -1.0});
  ASSERT_TRUE(c.kappa_star);
  EXPECT_EQ(*c.kappa_star, 2);
}

TEST(ClassifyRoots, ZeroConstantTermRejected) {
  EXPECT_THROW(classify_roots({0.0, 1.0}), Error);
}

TEST(ClassifyRoots, RandomRootsRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> r(0.2, 3.0), phase(0.0, 6.283185307179586);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<cplx> z;
    for (int k = 0; k < 6; ++k) {
      double mod = r(rng);
      if (std::abs(mod - 1.0) < 0.05) mod += 0.1;
      z.push_back(std::polar(mod, phase(rng)));
    }
    const auto p = UnivariatePolynomial::from_roots(z);
    const auto c = classify_roots(p);
    ASSERT_EQ(c.total_multiplicity(), 6);
    for (const cplx& root : z) {
      double best = 1e300;
      ModulusClass tag{};
      for (const auto& cr : c.roots)
        if (std::abs(cr.location - root) < best) {
          best = std::abs(cr.location - root);
          tag = cr.tag;
        }
      EXPECT_LT(best, 1e-8);
      EXPECT_EQ(tag, std::abs(root) < 1.0 ? ModulusClass::Inner : ModulusClass::Outer);
    }
  }
}

TEST(FactorByModulus, ProductReproducesPolynomial) {
  const UnivariatePolynomial p{3.0, -4.0, 1.0};  // (1-z)(3-z)
  const auto c = classify_roots(p);
  const auto f = factor_by_modulus(p, c);
  EXPECT_EQ(f.a_minus.degree(), 0u);
  EXPECT_EQ(f.a_zero.degree(), 1u);
  EXPECT_EQ(f.a_plus.degree(), 1u);
  for (double x : {-0.7, 0.2, 1.9}) {
    const cplx z(x, 0.3);
    EXPECT_NEAR(std::abs(f.a_minus(z) * f.a_zero(z) * f.a_plus(z) - p(z)), 0.0, 1e-9);
  }
}

TEST(NeumannInverse, MatchesGeometricSeries) {
  const auto s = neumann_inverse({2.0, -1.0}, 20);
  for (std::size_t n = 0; n <= 20; ++n) EXPECT_NEAR(s.coeffs[n].real(), std::pow(0.5, n + 1), 1e-15);
  EXPECT_NEAR(s.decay_rate, 0.5, 1e-14);
  EXPECT_LT(s.residual, 1e-15);
}

TEST(NeumannInverse, RejectsInnerRoot) { EXPECT_THROW(neumann_inverse({1.0, -2.0}, 4), Error); }

#include <gtest/gtest.h>

#include <random>

#include "dilated/polydisk.hpp"

using namespace dilated;

namespace {

SparseSymbol one_minus(std::size_t m, const MultiIndex& k, double c) {
  SparseSymbol a(m);
  a.add(MultiIndex(m), 1.0);
  a.add(k, -c);
  return a;
}

SparseSymbol random_symbol(std::uint64_t seed, std::size_t m) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  SparseSymbol a(m);
  a.add(MultiIndex(m), cplx(1.0, u(rng)));
  for (int k = 0; k < 6; ++k) {
    MultiIndex alpha(m);
    for (std::size_t j = 0; j < m; ++j) alpha[j] = static_cast<int>(rng() % 3);
    if (!alpha.is_zero()) a.add(alpha, cplx(u(rng), u(rng)));
  }
  return a;
}

}  // namespace

TEST(DualFunctional, Biorthogonality) {
  const MultiIndex upper{4, 4, 4};
  EXPECT_LE(biorthogonality_suite(EStarSymbol::uniform(3).symbol(), upper), 1e-10);
  EXPECT_LE(biorthogonality_suite(random_symbol(1, 3), upper), 1e-10);
  EXPECT_LE(biorthogonality_suite(random_symbol(2, 3), upper), 1e-10);
}

TEST(DualFunctional, NormIsTaylorMass) {
  // E* m=4: |b(sigma)|^2 summed over the box [0, 1]^4
  const auto phi = dual_functional(EStarSymbol::uniform(4).symbol(), MultiIndex{1, 1, 1, 1});
  // sum_sigma (|sigma|! / 4^|sigma|)^2 over sigma in {0,1}^4
  const double expected = 1.0 + 4 * std::pow(1.0 / 4, 2) + 6 * std::pow(2.0 / 16, 2) + 4 * std::pow(6.0 / 64, 2) +
                          std::pow(24.0 / 256, 2);
  EXPECT_NEAR(phi.norm_sq, expected, 1e-15);
}

TEST(ShellSums, EStarSlopes) {
  const auto s3 = shell_sums(EStarSymbol::uniform(3).symbol(), 256);
  const auto v3 = h2_verdict(s3);
  EXPECT_NEAR(v3.slope, -1.0, 0.15);
  EXPECT_EQ(v3.verdict, H2Membership::NonMember);
  EXPECT_GT(v3.log_fit_r2, 0.99);

  const auto s4 = shell_sums(EStarSymbol::uniform(4).symbol(), 256);
  const auto v4 = h2_verdict(s4);
  EXPECT_NEAR(v4.slope, -1.5, 0.15);
  EXPECT_EQ(v4.verdict, H2Membership::Member);
  EXPECT_LT(v4.cauchy_tail, 0.05);
}

TEST(ShellSums, PolynomialReciprocalIsMember) {
  const auto sh = shell_sums(one_minus(2, {1, 1}, 0.5), 64);
  const auto v = h2_verdict(sh);
  EXPECT_EQ(v.verdict, H2Membership::Member);
  EXPECT_NEAR(sh.partial.back(), 4.0 / 3.0, 1e-12);  // sum 4^-k
}

TEST(GramPolydisk, OracleExtremes) {
  const auto g1 = gram_section_polydisk(one_minus(1, {1}, 0.5), MultiIndex{6});
  EXPECT_NEAR(g1.extremes.min, 0.32612046748871376, 1e-12);
  EXPECT_NEAR(g1.extremes.max, 2.173879532511286, 1e-12);
  const auto g2 = gram_section_polydisk(one_minus(2, {1, 1}, 0.5), MultiIndex{3, 3});
  EXPECT_NEAR(g2.extremes.min, 0.44098300562505244, 1e-12);
  EXPECT_NEAR(g2.extremes.max, 2.059016994374947, 1e-12);
  const auto g3 = gram_section_polydisk(EStarSymbol::uniform(3).symbol(), MultiIndex{2, 2, 2});
  EXPECT_NEAR(g3.extremes.min, 0.2392651746258016, 1e-12);
  EXPECT_NEAR(g3.extremes.max, 3.0888883278864014, 1e-12);
}

TEST(GramPolydisk, SizeLimit) {
  EXPECT_THROW(gram_section_polydisk(EStarSymbol::uniform(3).symbol(), MultiIndex{20, 20, 20}), Error);
}

TEST(Riesz, Dichotomy) {
  for (const auto& a : {one_minus(1, {1}, 0.5), one_minus(2, {1, 1}, 0.5)}) {
    const auto v = riesz_basis_verdict(a);
    EXPECT_EQ(v.riesz, Tri::Yes);
    EXPECT_NEAR(v.min_modulus, 0.5, 1e-9);
    for (double c : v.evidence.condition) EXPECT_LE(c, 9.0 + 1e-6);
  }
  for (const auto& a : {EStarSymbol::uniform(3).symbol(), one_minus(1, {1}, 1.0)}) {
    const auto v = riesz_basis_verdict(a);
    EXPECT_EQ(v.riesz, Tri::No);
    const auto& lm = v.evidence.lambda_min;
    ASSERT_EQ(lm.size(), 5u);
    for (std::size_t i = 1; i < lm.size(); ++i) EXPECT_LT(lm[i], lm[i - 1]);
  }
}

TEST(Riesz, InteriorZeroIsFound) {
  // 1 - 2 w1 w2 vanishes at w1 = w2 = 1/sqrt(2)
  const auto v = riesz_basis_verdict(one_minus(2, {1, 1}, 2.0));
  EXPECT_EQ(v.riesz, Tri::No);
  EXPECT_LT(v.min_modulus, 1e-8);
}

TEST(PartialSums, RankOneIdentity) {
  const auto reps = partial_sum_norms(EStarSymbol::uniform(4).symbol(), {MultiIndex{1, 1, 1, 1}, MultiIndex{2, 2, 2, 2}});
  for (const auto& r : reps) EXPECT_NEAR(r.rank_one_matrix, r.rank_one_product, 1e-6 * r.rank_one_product);
}

TEST(PartialSums, DenseOracle) {
  // singular values of A P (. / A) assembled column by column
  const double expected[] = {1.1180339887498949, 1.2505098685370293, 1.3861021576393964, 1.5205225085739245};
  std::vector<MultiIndex> taus;
  for (int n = 0; n < 4; ++n) taus.push_back(MultiIndex::diagonal(4, n));
  const auto reps = partial_sum_norms(EStarSymbol::uniform(4).symbol(), taus);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    EXPECT_NEAR(reps[i].norm, expected[i], 1e-6 * expected[i]);
    EXPECT_TRUE(reps[i].exhausted);
  }
  EXPECT_NEAR(reps[0].norm, std::sqrt(1.25), 1e-12);
}

#include <gtest/gtest.h>

#include <cmath>

#include "dilated/weighted_torus.hpp"

using namespace dilated;

namespace {

TorusWeight constant_weight(std::size_t m) {
  SparseSymbol a(m);
  a.add(MultiIndex(m), 1.0);
  return weight_from_symbol(a, false);
}

}  // namespace

TEST(TorusWeight, FourierMatchesDirectEvaluation) {
  const auto w = weight_from_estar(EStarSymbol({{0.2, 0.3, 0.5}}));
  for (double s : {0.0, 0.3, -1.1, 2.7}) {
    const std::vector<double> t{s, 0.5 * s + 0.1, -s};
    EXPECT_NEAR(w(t), w.direct(t), 1e-14);
  }
  EXPECT_NEAR(w.fourier_coefficient(MultiIndex(3)).real(), 1.0 + 0.04 + 0.09 + 0.25, 1e-15);
  EXPECT_NEAR(w.fourier_coefficient(MultiIndex{1, -1, 0}).real(), 0.06, 1e-15);
}

TEST(TorusWeight, ModelHasNoFourierData) {
  try {
    model_weight(2).fourier_coefficient(MultiIndex{0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WrongWeightKind);
  }
}

TEST(TorusWeight, ZeroLocatedOnTorus) {
  SparseSymbol a(1);
  a.add({0}, 1.0);
  a.add({1}, -1.0);
  const auto w = weight_from_symbol(a);
  ASSERT_EQ(w.zeros.size(), 1u);
  EXPECT_NEAR(w.zeros[0][0], 0.0, 1e-6);
}

TEST(WeightProfile, EStarRatioIsBoundedAboveAndBelow) {
  // P / (|t|^4 + l^2) tends to 1/64 on the hyperplane l = 0 and to 1 on the diagonal for c = 1/4
  const auto p = weight_profile_check(weight_from_estar(EStarSymbol::uniform(4)));
  EXPECT_EQ(p.samples, 4096u);
  EXPECT_GT(p.ratio_min, 1.0 / 64 * 0.9);
  EXPECT_LT(p.ratio_max, 1.05);
  EXPECT_NEAR(p.spread(), 64.0, 8.0);
}

TEST(WeightProfile, RequiresEStarWeight) {
  EXPECT_THROW(weight_profile_check(constant_weight(2)), Error);
}

TEST(A2, ConstantWeightIsExactlyOne) {
  A2Options opt;
  opt.s_min = 1;
  opt.s_max = 4;
  const auto rep = a2_estimate(constant_weight(2), opt);
  for (const auto& s : rep.scales) {
    EXPECT_EQ(s.sup, 1.0);
    EXPECT_EQ(s.status, QuadStatus::Converged);
  }
}

TEST(A2, UnitCircleZeroDiverges) {
  SparseSymbol a(1);
  a.add({0}, 1.0);
  a.add({1}, -1.0);
  A2Options opt;
  opt.s_max = 5;
  const auto rep = a2_estimate(weight_from_symbol(a), opt);
  for (const auto& s : rep.scales) EXPECT_EQ(s.status, QuadStatus::Diverging);
  EXPECT_FALSE(rep.warnings.empty());
}

TEST(A2, OuterSymbolStaysBounded) {
  SparseSymbol a(1);
  a.add({0}, 2.0);
  a.add({1}, -1.0);
  A2Options opt;
  opt.s_max = 6;
  const auto rep = a2_estimate(weight_from_symbol(a), opt);
  for (const auto& s : rep.scales) {
    EXPECT_EQ(s.status, QuadStatus::Converged);
    EXPECT_GE(s.sup, 1.0 - 1e-9);
    EXPECT_LE(s.sup, 9.0);
  }
}

TEST(ExactAverage, MatchesQuadrature) {
  const auto w = weight_from_estar(EStarSymbol::uniform(2));
  const std::vector<double> c{0.3, -0.2};
  const double h = 0.25;
  const double exact = detail::exact_average(w, c, h);
  const std::vector<double> lo{c[0] - h, c[1] - h}, hi{c[0] + h, c[1] + h};
  const double quad = tensor_gauss<20>([&](std::span<const double> t) { return w(t); }, lo, hi) / (4 * h * h);
  EXPECT_NEAR(exact, quad, 1e-13);
}

TEST(IntegralTest, ReducedClosedForm) {
  const auto r = integral_test(4, 0.5);
  ASSERT_TRUE(r.reduced);
  EXPECT_DOUBLE_EQ(*r.reduced, std::acos(-1.0) / 8);
}

TEST(IntegralTest, BallEstimateMatchesQuadratureOracle) {
  // adaptive quadrature over the sphere of the zeta_0-integrated form
  const auto r = integral_test(4, 0.5);
  EXPECT_NEAR(r.direct_estimate, 22.6333042703, 0.02 * 22.6333042703);
  EXPECT_EQ(r.verdict, "finite");
}

TEST(IntegralTest, PolarMatchesReduced) {
  IntegralOptions opt;
  opt.method = IntegralMethod::Polar;
  for (std::size_t m : {4, 5}) {
    const auto r = integral_test(m, 0.5, opt);
    EXPECT_NEAR(r.direct_estimate, *r.reduced, 0.02 * *r.reduced);
  }
}

TEST(IntegralTest, ThreeVariablesDiverge) {
  for (auto method : {IntegralMethod::Ball, IntegralMethod::Polar}) {
    IntegralOptions opt;
    opt.method = method;
    const auto r = integral_test(3, 0.5, opt);
    EXPECT_FALSE(r.reduced);
    EXPECT_TRUE(r.divergent);
    EXPECT_EQ(r.verdict, "divergent");
  }
}

TEST(IntegralTest, Deterministic) {
  EXPECT_EQ(integral_test(5, 0.5).estimates, integral_test(5, 0.5).estimates);
}

TEST(QM, UnweightedNormIsOne) {
  for (std::size_t m : {1, 2, 3})
    for (int n = 0; n <= 3; ++n) {
      const auto w = constant_weight(m);
      std::vector<std::uint64_t> primes = {2, 3, 5};
      primes.resize(m);
      EXPECT_NEAR(qm_projection_norm(w, LinearForm::from_primes(primes), n).norm, 1.0, 1e-10);
      std::vector<double> mu(m, 0.0);
      mu[0] = 1.0;
      EXPECT_NEAR(qm_projection_norm(w, LinearForm::rational_form(mu), n).norm, 1.0, 1e-10);
    }
}

TEST(QM, SymbolWeightMatchesFftOracle) {
  // Gram from FFT coefficients of |A|^2, generalized eigenvalue by dense solver
  const auto w = weight_from_estar(EStarSymbol::uniform(2));
  const auto form = LinearForm::from_primes({2, 3});
  EXPECT_NEAR(qm_projection_norm(w, form, 1).norm, 1.2689855014780715, 1e-10);
  EXPECT_NEAR(qm_projection_norm(w, form, 2).norm, 1.5257352634411714, 1e-10);
}

TEST(QM, ModelWeightRuns) {
  const auto r = qm_projection_norm(model_weight(2), LinearForm::from_primes({2, 3}), 2);
  EXPECT_GE(r.norm, 1.0 - 1e-9);
  EXPECT_LT(r.quadrature_error, 1e-8);
}

TEST(WeightedSections, MatchFftOracle) {
  const auto w = weight_from_estar(EStarSymbol::uniform(2));
  const auto reps = weighted_partial_sum_norms(w, {MultiIndex{1, 1}, MultiIndex{2, 2}}, 5);
  EXPECT_NEAR(reps[0].norm, 1.3731981983025265, 1e-10);
  EXPECT_NEAR(reps[1].norm, 1.4611882471910014, 1e-10);
  const auto full = weighted_partial_sum_norms(w, {MultiIndex{5, 5}}, 5);
  EXPECT_NEAR(full[0].norm, 1.0, 1e-10);
}

TEST(WeightedSections, SizeLimit) {
  EXPECT_THROW(weighted_partial_sum_norms(constant_weight(4), {MultiIndex{1, 1, 1, 1}}, 12), Error);
}

TEST(LinearForm, RationalKeepsBoundary) {
  const auto f = LinearForm::rational_form({1.0, -1.0});
  EXPECT_TRUE(f.keeps(MultiIndex{2, 2}));
  EXPECT_FALSE(f.keeps(MultiIndex{1, 2}));
}

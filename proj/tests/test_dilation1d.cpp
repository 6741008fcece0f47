#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dilated/dilation1d.hpp"

using namespace dilated;

namespace {

DilationSystemSpec spec(UnivariatePolynomial a) { return {std::move(a), 2, ""}; }

UnivariatePolynomial one_minus_z_pow(int mu) {
  std::vector<cplx> c{1.0};
  for (int k = 0; k < mu; ++k) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j] += c[j];
      next[j + 1] -= c[j];
    }
    c = next;
  }
  return UnivariatePolynomial(c);
}

}  // namespace

TEST(BasisVerdict, Suite) {
  struct Case {
    UnivariatePolynomial a;
    bool basis;
    Tri complete;
  };
  const Case cases[] = {
      {{2.0, -1.0}, true, Tri::Yes},
      {{1.0, -1.0}, false, Tri::Yes},
      {{1.0, -2.0}, false, Tri::No},
      {{2.0, -5.0, 4.0, -1.0}, false, Tri::Yes},
      {{3.0, -4.0, 1.0}, false, Tri::Yes},
  };
  for (const auto& c : cases) {
    const auto v = basis_verdict(spec(c.a));
    EXPECT_EQ(v.basis, c.basis);
    EXPECT_EQ(v.complete, c.complete);
    EXPECT_TRUE(v.minimal);
  }
}

TEST(GramSection, ExtremesMatchDenseOracle) {
  // dense Gram of explicit u_n vectors, N = 64
  const auto g = gram_section(spec({2.0, -1.0}), 64);
  EXPECT_NEAR(g.extremes.min, 1.304481869954855, 1e-12);
  EXPECT_NEAR(g.extremes.max, 8.6955181300451443, 1e-12);
  EXPECT_TRUE(g.hermitian);
  const auto h = gram_section(spec({3.0, -4.0, 1.0}), 32);
  EXPECT_NEAR(h.extremes.min, 1.1889220887006413, 1e-12);
  EXPECT_NEAR(h.extremes.max, 58.919535097243099, 1e-11);
}

TEST(GramSection, RieszBoundsForOuterSymbol) {
  // min |a|^2 = 1 and max |a|^2 = 9 on the circle for 2 - z
  for (std::size_t n : {8, 50, 200}) {
    const auto g = gram_section(spec({2.0, -1.0}), n);
    EXPECT_GE(g.extremes.min, 1.0 - 1e-12);
    EXPECT_LE(g.extremes.max, 9.0 + 1e-12);
  }
}

TEST(GramSection, SizeLimit) {
  try {
    gram_section(spec({2.0, -1.0}), 5000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeLimit);
  }
}

TEST(ReciprocalSeries, ExactRationalOracle) {
  // 1/((1-z)(3-z)) = (1/3, 4/9, 13/27, 40/81, ...)
  const auto b = reciprocal_coefficients({3.0, -4.0, 1.0}, 8);
  const double num[] = {1, 4, 13, 40, 121, 364, 1093, 3280};
  for (std::size_t n = 0; n < 8; ++n) EXPECT_NEAR(b[n].real(), num[n] / std::pow(3.0, n + 1), 1e-15);
}

TEST(DualChainNorms, ClosedForms) {
  const double expected[] = {4.0, 30.0, 146.0};
  for (int mu = 1; mu <= 3; ++mu) {
    const auto d = dual_chain_norms(spec(one_minus_z_pow(mu)), 3);
    EXPECT_NEAR(d.norm_sq[3], expected[mu - 1], 1e-12 * expected[mu - 1]);
  }
}

TEST(DualChainNorms, IndependentOfChain) {
  const auto s = spec({1.0, -1.0});
  const auto a = dual_chain_norms(s, 50, 1);
  const auto b = dual_chain_norms(s, 50, 7);
  EXPECT_EQ(a.norm_sq, b.norm_sq);
  EXPECT_EQ(b.omega, 7u);
  EXPECT_THROW(dual_chain_norms(s, 50, 6), Error);
}

TEST(ExponentFit, GrowthExponents) {
  for (int mu = 1; mu <= 3; ++mu) {
    const auto d = dual_chain_norms(spec(one_minus_z_pow(mu)), 10000);
    const auto f = exponent_fit(d, 100);
    EXPECT_NEAR(f.exponent, mu - 0.5, 0.05);
  }
}

TEST(ExponentFit, BoundedNormsPlateau) {
  const auto d = dual_chain_norms(spec({2.0, -1.0}), 2000);
  try {
    exponent_fit(d, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BoundedSequence);
  }
}

TEST(Witness, AnnihilatesSystem) {
  const auto w = incompleteness_witness(spec({1.0, -2.0}), std::nullopt, 30);
  EXPECT_NEAR(w.root.real(), 0.5, 1e-14);
  EXPECT_LE(w.max_residual, 1e-8);
  EXPECT_LE(w.max_residual, w.residual_bound);
  double norm = 0.0;
  for (const cplx& c : w.coeffs) norm += std::norm(c);
  EXPECT_NEAR(norm, 1.0, 1e-14);
}

TEST(Witness, NoInnerRoot) {
  try {
    incompleteness_witness(spec({2.0, -1.0}), std::nullopt, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoInnerRoot);
  }
}

TEST(MinimalityDuals, BiorthogonalOnRandomSymbols) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> c{cplx(1.0 + std::abs(u(rng)), u(rng))};
    for (int j = 0; j < 3; ++j) c.push_back(cplx(u(rng), u(rng)));
    const auto d = minimality_duals(spec(UnivariatePolynomial(c)), 64);
    EXPECT_LT(d.max_residual, 1e-10);
  }
}

TEST(DilationSystemSpec, RejectsCompositePrime) {
  DilationSystemSpec s{{2.0, -1.0}, 4, ""};
  EXPECT_THROW(basis_verdict(s), Error);
}

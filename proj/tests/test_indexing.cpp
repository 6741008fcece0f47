#include <gtest/gtest.h>

#include <random>
#include <set>

#include "dilated/multi_index.hpp"
#include "dilated/omega.hpp"

using namespace dilated;

TEST(ShellIndexer, RankUnrankRoundTrip) {
  ShellIndexer idx(4, 20);
  for (std::size_t n = 0; n <= 20; ++n) {
    std::vector<int> sigma = idx.unrank(n, 0);
    for (std::uint64_t r = 0; r < idx.shell_size(n); ++r) {
      EXPECT_EQ(idx.rank(std::span<const int>(sigma)), r);
      EXPECT_EQ(idx.unrank(n, r), sigma);
      int total = 0;
      for (int s : sigma) total += s;
      EXPECT_EQ(total, static_cast<int>(n));
      idx.next(sigma);
    }
  }
}

TEST(ShellIndexer, ShellSizesAreStarsAndBars) {
  ShellIndexer idx(3, 10);
  EXPECT_EQ(idx.shell_size(0), 1u);
  EXPECT_EQ(idx.shell_size(4), 15u);
  EXPECT_EQ(idx.shell_size(10), 66u);
}

TEST(BoxIndexer, IndexIsLinear) {
  BoxIndexer box(MultiIndex{3, 2, 4});
  EXPECT_EQ(box.size(), 60u);
  std::set<std::size_t> seen;
  for_each_in_box(box.upper(), [&](const MultiIndex& a) { seen.insert(box.index(a)); });
  EXPECT_EQ(seen.size(), 60u);
  const MultiIndex s{3, 1, 4}, b{1, 1, 2};
  EXPECT_EQ(box.index(s - b), box.index(s) - box.index(b));
}

TEST(Omega, DecomposeRoundTripUpToOneMillion) {
  const std::uint64_t primes[] = {2, 3};
  for (std::uint64_t n = 1; n <= 1'000'000; ++n) {
    const auto d = omega_decompose(n, primes);
    ASSERT_EQ(d.reconstruct(primes), n);
    ASSERT_NE(d.omega % 2, 0u);
    ASSERT_NE(d.omega % 3, 0u);
  }
}

TEST(Omega, ParsevalOnRandomVectors) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> idx(1, 100000);
  std::normal_distribution<double> val(0.0, 1.0);
  const std::uint64_t primes[] = {2, 3, 5};
  for (int trial = 0; trial < 100; ++trial) {
    std::map<std::uint64_t, cplx> f;
    for (int k = 0; k < 200; ++k) f[idx(rng)] += cplx(val(rng), val(rng));
    double norm = 0.0;
    for (const auto& [n, v] : f) norm += std::norm(v);
    EXPECT_LE(omega_parseval_check(f, primes), 1e-12 * norm);
  }
}

TEST(BuildSymbol, SingleClass) {
  // S = e_1 - e_2/2 - e_3/2 with primes 2, 3
  const std::map<std::uint64_t, cplx> spec{{1, 1.0}, {2, -0.5}, {3, -0.5}};
  const std::uint64_t primes[] = {2, 3};
  const auto part = build_symbol(spec, primes);
  EXPECT_FALSE(part.multi_class);
  const auto& a = part.symbol();
  EXPECT_EQ(a.coeff(MultiIndex{0, 0}), cplx(1.0));
  EXPECT_EQ(a.coeff(MultiIndex{1, 0}), cplx(-0.5));
  EXPECT_EQ(a.coeff(MultiIndex{0, 1}), cplx(-0.5));
}

TEST(BuildSymbol, MultiClassWarns) {
  const std::map<std::uint64_t, cplx> spec{{1, 1.0}, {5, 1.0}};
  const std::uint64_t primes[] = {2};
  const auto part = build_symbol(spec, primes);
  EXPECT_TRUE(part.multi_class);
  ASSERT_EQ(part.warnings.size(), 1u);
  EXPECT_EQ(part.warnings[0].kind, "MultiClass");
}

TEST(BuildSymbol, RepeatedPrimeRejected) {
  const std::map<std::uint64_t, cplx> spec{{1, 1.0}};
  const std::uint64_t primes[] = {2, 2};
  EXPECT_THROW(build_symbol(spec, primes), Error);
}

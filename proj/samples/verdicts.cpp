// Verdicts for a few generators S and the H2 dichotomy for the E* symbol.

#include <cstdio>

#include "dilated/dilated.hpp"

int main() {
  using namespace dilated;
  const struct {
    const char* label;
    UnivariatePolynomial a;
  } cases[] = {
      {"2 - z", {2.0, -1.0}},
      {"1 - z", {1.0, -1.0}},
      {"1 - 2z", {1.0, -2.0}},
      {"(1-z)^2 (2-z)", {2.0, -5.0, 4.0, -1.0}},
  };
  for (const auto& c : cases) {
    const auto v = basis_verdict({c.a, 2, c.label});
    std::printf("%-14s basis=%-3s complete=%-3s minimal=%s\n", c.label, v.basis ? "yes" : "no", to_string(v.complete),
                v.minimal ? "yes" : "no");
  }

  for (std::size_t m : {3, 4}) {
    const auto sums = shell_sums(EStarSymbol::uniform(m).symbol(), 128);
    const auto h2 = h2_verdict(sums);
    std::printf("E* m=%zu: slope %.3f, 1/A %s H2\n", m, h2.slope,
                h2.verdict == H2Membership::Member ? "in" : "not in");
  }
}

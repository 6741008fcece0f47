#pragma once

#include <cstdint>
#include <vector>

#include "dilated/linalg.hpp"

namespace dilated {

/// Dense diagonal block of a finite Gram section. positions[i] is the row of
/// local index i in the full section.
struct GramBlock {
  std::uint64_t omega = 1;
  std::vector<std::size_t> positions;
  Matrix entries;
};

/// Finite Hermitian section G(i, j) = <x_i, x_j>, stored as its nonzero diagonal blocks.
struct GramSection {
  std::size_t size = 0;
  std::vector<GramBlock> blocks;
  bool hermitian = true;
  EigenExtremes extremes;

  double condition() const { return extremes.condition(); }

  Matrix dense() const {
    Matrix g = Matrix::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    for (const auto& b : blocks)
      for (std::size_t i = 0; i < b.positions.size(); ++i)
        for (std::size_t j = 0; j < b.positions.size(); ++j)
          g(static_cast<Eigen::Index>(b.positions[i]), static_cast<Eigen::Index>(b.positions[j])) =
              b.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return g;
  }

  cplx entry(std::size_t row, std::size_t col) const {
    for (const auto& b : blocks) {
      long ri = -1, ci = -1;
      for (std::size_t i = 0; i < b.positions.size(); ++i) {
        if (b.positions[i] == row) ri = static_cast<long>(i);
        if (b.positions[i] == col) ci = static_cast<long>(i);
      }
      if (ri >= 0 && ci >= 0) return b.entries(ri, ci);
      if (ri >= 0 || ci >= 0) return 0.0;
    }
    return 0.0;
  }
};

inline void finalize_gram(GramSection& g) {
  g.hermitian = true;
  bool first = true;
  for (const auto& b : g.blocks) {
    if (!b.entries.isApprox(b.entries.adjoint(), 1e-14)) g.hermitian = false;
    const auto ex = hermitian_extremes(b.entries);
    if (first) {
      g.extremes = ex;
      first = false;
    } else {
      g.extremes.min = std::min(g.extremes.min, ex.min);
      g.extremes.max = std::max(g.extremes.max, ex.max);
    }
  }
}

}  // namespace dilated

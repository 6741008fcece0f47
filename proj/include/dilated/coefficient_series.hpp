#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "dilated/error.hpp"
#include "dilated/multi_index.hpp"
#include "dilated/numeric.hpp"
#include "dilated/symbol.hpp"

namespace dilated {

enum class SeriesMode { Full, Streaming };

inline constexpr std::uint64_t kMaxFullTableEntries = 50'000'000;

inline double pairwise_norm_sum(std::span<const cplx> v) {
  constexpr std::size_t kLeaf = 64;
  if (v.size() <= kLeaf) {
    double acc = 0.0;
    for (const cplx& x : v) acc += std::norm(x);
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_norm_sum(v.first(half)) + pairwise_norm_sum(v.subspan(half));
}

/// Taylor coefficients b(sigma) of 1/A(w), organized by shells |sigma| = n.
/// Computed from A(0) b(sigma) = delta(sigma, 0) - sum_{beta in K, beta != 0} a(beta) b(sigma - beta).
/// Streaming mode keeps only the last total_degree(A) + 1 shells.
class CoefficientTable {
 public:
  CoefficientTable(const SparseSymbol& a, std::size_t cutoff, SeriesMode mode = SeriesMode::Full)
      : arity_(a.arity()), cutoff_(cutoff), mode_(mode), indexer_(a.arity(), cutoff + 1) {
    const cplx a0 = a.constant_term();
    require(a0 != cplx(0.0), ErrorKind::ZeroConstantTerm, "A(0) = 0: 1/A has no Taylor expansion at 0");
    for (const auto& [beta, v] : a.terms())
      if (!beta.is_zero()) terms_.push_back({beta.exponents(), beta.total(), v});
    const int deg = a.total_degree();
    window_ = static_cast<std::size_t>(deg) + 1;
    if (mode_ == SeriesMode::Full) {
      std::uint64_t total = 0;
      for (std::size_t n = 0; n <= cutoff; ++n) {
        total += indexer_.shell_size(n);
        require(total <= kMaxFullTableEntries, ErrorKind::SizeLimit,
                "full coefficient table exceeds " + std::to_string(kMaxFullTableEntries) + " entries; use streaming");
      }
      shells_.resize(cutoff + 1);
    } else {
      shells_.resize(window_);
    }
    shell_sums_.resize(cutoff + 1);
    for (std::size_t n = 0; n <= cutoff; ++n) compute_shell(n, a0);
  }

  std::size_t arity() const { return arity_; }
  std::size_t cutoff() const { return cutoff_; }
  SeriesMode mode() const { return mode_; }
  const ShellIndexer& indexer() const { return indexer_; }

  /// s_n = sum_{|sigma| = n} |b(sigma)|^2
  const std::vector<double>& shell_sums() const { return shell_sums_; }

  bool retained(std::size_t n) const {
    return n <= cutoff_ && (mode_ == SeriesMode::Full || n + window_ > cutoff_);
  }

  const std::vector<cplx>& shell(std::size_t n) const {
    require(retained(n), ErrorKind::InvalidArgument, "shell " + std::to_string(n) + " is not retained");
    return shells_[slot(n)];
  }

  cplx at(const MultiIndex& sigma) const {
    require(sigma.arity() == arity_ && sigma.nonnegative(), ErrorKind::InvalidArgument, "bad index " + sigma.str());
    const auto n = static_cast<std::size_t>(sigma.total());
    return shell(n)[indexer_.rank(sigma)];
  }

  /// Largest |sum_beta a(beta) b(sigma - beta) - delta(sigma, 0)| over retained sigma
  /// whose convolution inputs are retained too.
  double convolution_residual(const SparseSymbol& a) const {
    double worst = 0.0;
    for (std::size_t n = 0; n <= cutoff_; ++n) {
      if (!retained(n) || (n >= static_cast<std::size_t>(a.total_degree()) &&
                           !retained(n - static_cast<std::size_t>(a.total_degree()))))
        continue;
      const auto& sh = shell(n);
      std::vector<int> sigma = indexer_.unrank(n, 0);
      for (std::uint64_t r = 0; r < sh.size(); ++r) {
        cplx acc = 0.0;
        for (const auto& [beta, v] : a.terms()) {
          std::vector<int> d(arity_);
          bool ok = true;
          for (std::size_t j = 0; j < arity_; ++j) {
            d[j] = sigma[j] - beta[j];
            ok = ok && d[j] >= 0;
          }
          if (!ok) continue;
          acc += v * at(MultiIndex(d));
        }
        worst = std::max(worst, std::abs(acc - (n == 0 ? cplx(1.0) : cplx(0.0))));
        indexer_.next(sigma);
      }
    }
    return worst;
  }

 private:
  struct Term {
    std::vector<int> beta;
    int order;
    cplx value;
  };

  std::size_t slot(std::size_t n) const { return mode_ == SeriesMode::Full ? n : n % window_; }

  void compute_shell(std::size_t n, cplx a0) {
    const std::uint64_t count = indexer_.shell_size(n);
    std::vector<cplx> out(count);
    parallel_for(count, [&](std::size_t lo, std::size_t hi) {
      std::vector<int> sigma = indexer_.unrank(n, lo);
      std::vector<int> diff(arity_);
      for (std::size_t r = lo; r < hi; ++r) {
        cplx acc = n == 0 ? cplx(1.0) : cplx(0.0);
        for (const Term& t : terms_) {
          if (static_cast<std::size_t>(t.order) > n) continue;
          bool ok = true;
          for (std::size_t j = 0; j < arity_; ++j) {
            diff[j] = sigma[j] - t.beta[j];
            if (diff[j] < 0) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          const std::size_t src = n - static_cast<std::size_t>(t.order);
          acc -= t.value * shells_[slot(src)][indexer_.rank(std::span<const int>(diff))];
        }
        out[r] = acc / a0;
        indexer_.next(sigma);
      }
    });
    shell_sums_[n] = pairwise_norm_sum(out);
    shells_[slot(n)] = std::move(out);
  }

  std::size_t arity_;
  std::size_t cutoff_;
  SeriesMode mode_;
  ShellIndexer indexer_;
  std::vector<Term> terms_;
  std::size_t window_ = 1;
  std::vector<std::vector<cplx>> shells_;
  std::vector<double> shell_sums_;
};

inline CoefficientTable coefficient_series(const SparseSymbol& a, std::size_t cutoff,
                                           SeriesMode mode = SeriesMode::Full) {
  return CoefficientTable(a, cutoff, mode);
}

}  // namespace dilated

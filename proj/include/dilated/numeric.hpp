#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "dilated/error.hpp"

namespace dilated {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Pairwise summation. The reduction tree depends only on the input length,
/// so results are reproducible regardless of how the input was produced.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  constexpr std::size_t kLeaf = 32;
  if (values.size() <= kLeaf) {
    T acc{};
    for (const T& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
  return pairwise_sum(std::span<const T>(values));
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope * x.
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorKind::InvalidArgument, "fit_line: size mismatch");
  require(x.size() >= 2, ErrorKind::InvalidArgument, "fit_line: need at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0.0, ErrorKind::InvalidArgument, "fit_line: degenerate abscissae");
  LinearFit fit;
  fit.points = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double sse = std::max(0.0, syy - fit.slope * sxy);
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.slope_stderr = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
  return fit;
}

/// Binomial coefficients C(i, k) for i <= max_n, k <= max_k, saturating at UINT64_MAX.
class BinomialTable {
 public:
  BinomialTable(std::size_t max_n, std::size_t max_k)
      : max_k_(max_k), table_((max_n + 1) * (max_k + 1), 0) {
    for (std::size_t i = 0; i <= max_n; ++i) {
      at(i, 0) = 1;
      for (std::size_t k = 1; k <= std::min(i, max_k); ++k) {
        const std::uint64_t a = at(i - 1, k - 1);
        const std::uint64_t b = k <= i - 1 ? at(i - 1, k) : 0;
        at(i, k) = a > std::numeric_limits<std::uint64_t>::max() - b
                       ? std::numeric_limits<std::uint64_t>::max()
                       : a + b;
      }
    }
  }

  std::uint64_t operator()(std::size_t i, std::size_t k) const {
    if (k > i) return 0;
    return table_[i * (max_k_ + 1) + k];
  }

 private:
  std::uint64_t& at(std::size_t i, std::size_t k) { return table_[i * (max_k_ + 1) + k]; }

  std::size_t max_k_;
  std::vector<std::uint64_t> table_;
};

inline double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// Additive-recurrence low-discrepancy sequence (Kronecker / R_d). Point i, coordinate j in [0, 1).
class KroneckerSequence {
 public:
  explicit KroneckerSequence(std::size_t dim, double offset = 0.5) : alpha_(dim), offset_(offset) {
    // phi_d: unique positive root of x^(d+1) = x + 1
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(dim + 1));
    for (std::size_t j = 0; j < dim; ++j) alpha_[j] = std::fmod(std::pow(1.0 / phi, static_cast<double>(j + 1)), 1.0);
  }

  double operator()(std::size_t i, std::size_t j) const {
    return std::fmod(offset_ + alpha_[j] * static_cast<double>(i + 1), 1.0);
  }

  std::size_t dim() const { return alpha_.size(); }

 private:
  std::vector<double> alpha_;
  double offset_;
};

/// Worker count: DILATED_BASIS_THREADS caps hardware concurrency.
inline unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DILATED_BASIS_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

/// Splits [0, count) into contiguous chunks, one per worker. Each index is
/// processed exactly once and writes must go to disjoint locations, so the
/// result does not depend on the worker count.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body,
                         std::size_t min_chunk = 4096) {
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(thread_count(), std::max<std::size_t>(1, count / std::max<std::size_t>(1, min_chunk))));
  if (workers <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
}

}  // namespace dilated

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "dilated/error.hpp"
#include "dilated/numeric.hpp"

namespace dilated {

/// Exponent tuple. Elements of N_0^m for monomials; Fourier indices on the
/// torus use the same type with signed entries.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t arity) : e_(arity, 0) {}
  explicit MultiIndex(std::vector<int> e) : e_(std::move(e)) {}
  MultiIndex(std::initializer_list<int> e) : e_(e) {}

  static MultiIndex unit(std::size_t arity, std::size_t j) {
    MultiIndex u(arity);
    u.e_[j] = 1;
    return u;
  }
  static MultiIndex diagonal(std::size_t arity, int n) { return MultiIndex(std::vector<int>(arity, n)); }

  std::size_t arity() const { return e_.size(); }
  int operator[](std::size_t j) const { return e_[j]; }
  int& operator[](std::size_t j) { return e_[j]; }
  const std::vector<int>& exponents() const { return e_; }

  int total() const { return std::accumulate(e_.begin(), e_.end(), 0); }
  int max_entry() const { return e_.empty() ? 0 : *std::max_element(e_.begin(), e_.end()); }
  bool nonnegative() const {
    return std::all_of(e_.begin(), e_.end(), [](int v) { return v >= 0; });
  }
  bool is_zero() const {
    return std::all_of(e_.begin(), e_.end(), [](int v) { return v == 0; });
  }

  /// componentwise partial order
  bool leq(const MultiIndex& o) const {
    for (std::size_t j = 0; j < e_.size(); ++j)
      if (e_[j] > o.e_[j]) return false;
    return true;
  }

  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) {
    for (std::size_t j = 0; j < a.e_.size(); ++j) a.e_[j] += b.e_[j];
    return a;
  }
  friend MultiIndex operator-(MultiIndex a, const MultiIndex& b) {
    for (std::size_t j = 0; j < a.e_.size(); ++j) a.e_[j] -= b.e_[j];
    return a;
  }
  MultiIndex operator-() const {
    MultiIndex r(*this);
    for (int& v : r.e_) v = -v;
    return r;
  }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t j = 0; j < e_.size(); ++j) {
      if (j) s += ",";
      s += std::to_string(e_[j]);
    }
    return s + ")";
  }

 private:
  std::vector<int> e_;
};

/// Calls f(alpha) for every alpha with 0 <= alpha <= upper, first coordinate fastest.
template <typename F>
void for_each_in_box(const MultiIndex& upper, F&& f) {
  const std::size_t m = upper.arity();
  MultiIndex a(m);
  if (!upper.nonnegative()) return;
  for (;;) {
    f(static_cast<const MultiIndex&>(a));
    std::size_t j = 0;
    while (j < m) {
      if (a[j] < upper[j]) {
        ++a[j];
        break;
      }
      a[j] = 0;
      ++j;
    }
    if (j == m) return;
  }
}

/// Dense numbering of the box 0 <= alpha <= upper (first coordinate fastest).
class BoxIndexer {
 public:
  explicit BoxIndexer(MultiIndex upper) : upper_(std::move(upper)), stride_(upper_.arity()) {
    require(upper_.nonnegative(), ErrorKind::InvalidArgument, "box upper corner must be nonnegative");
    std::size_t s = 1;
    for (std::size_t j = 0; j < upper_.arity(); ++j) {
      stride_[j] = s;
      s *= static_cast<std::size_t>(upper_[j] + 1);
    }
    size_ = s;
  }

  std::size_t size() const { return size_; }
  const MultiIndex& upper() const { return upper_; }
  bool contains(const MultiIndex& a) const { return a.nonnegative() && a.leq(upper_); }

  std::size_t index(const MultiIndex& a) const {
    std::size_t k = 0;
    for (std::size_t j = 0; j < a.arity(); ++j) k += stride_[j] * static_cast<std::size_t>(a[j]);
    return k;
  }

  MultiIndex at(std::size_t k) const {
    MultiIndex a(upper_.arity());
    for (std::size_t j = 0; j < upper_.arity(); ++j) {
      a[j] = static_cast<int>(k % static_cast<std::size_t>(upper_[j] + 1));
      k /= static_cast<std::size_t>(upper_[j] + 1);
    }
    return a;
  }

 private:
  MultiIndex upper_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 1;
};

/// Ranks the shell {sigma in N_0^m : |sigma| = n} onto [0, C(n+m-1, m-1)) via
/// stars and bars: the partial sums s_k give an (m-1)-subset c_k = s_k + k - 1,
/// ranked in the combinatorial number system.
class ShellIndexer {
 public:
  ShellIndexer(std::size_t arity, std::size_t max_total)
      : m_(arity), binom_(max_total + arity + 1, arity == 0 ? 0 : arity) {
    require(arity >= 1, ErrorKind::InvalidArgument, "arity must be at least 1");
  }

  std::size_t arity() const { return m_; }

  std::uint64_t shell_size(std::size_t n) const { return m_ == 1 ? 1 : binom_(n + m_ - 1, m_ - 1); }

  std::uint64_t rank(std::span<const int> sigma) const {
    std::uint64_t r = 0;
    std::size_t s = 0;
    for (std::size_t k = 1; k < m_; ++k) {
      s += static_cast<std::size_t>(sigma[k - 1]);
      r += binom_(s + k - 1, k);
    }
    return r;
  }
  std::uint64_t rank(const MultiIndex& sigma) const { return rank(std::span<const int>(sigma.exponents())); }

  /// Inverse of rank within shell n.
  std::vector<int> unrank(std::size_t n, std::uint64_t r) const {
    std::vector<int> sigma(m_, 0);
    if (m_ == 1) {
      sigma[0] = static_cast<int>(n);
      return sigma;
    }
    std::vector<std::size_t> c(m_, 0);
    std::size_t hi = n + m_ - 2;
    for (std::size_t k = m_ - 1; k >= 1; --k) {
      std::size_t v = hi;
      while (binom_(v, k) > r) --v;
      c[k] = v;
      r -= binom_(v, k);
      hi = v == 0 ? 0 : v - 1;
    }
    std::size_t prev = 0;
    for (std::size_t k = 1; k < m_; ++k) {
      const std::size_t s = c[k] - (k - 1);
      sigma[k - 1] = static_cast<int>(s - prev);
      prev = s;
    }
    sigma[m_ - 1] = static_cast<int>(n - prev);
    return sigma;
  }

  /// Advances sigma to the composition of the next rank; false after the last.
  /// In subset form this increments the lowest c_k with room above it, which
  /// moves one unit from the first positive sigma_i (i >= 1) down to sigma_{i-1}
  /// and gathers everything below into sigma_{i-1}.
  bool next(std::span<int> sigma) const {
    std::size_t i = 1;
    int below = sigma.empty() ? 0 : sigma[0];
    for (; i < m_; ++i) {
      if (sigma[i] > 0) break;
      below += sigma[i];
    }
    if (i >= m_) return false;
    for (std::size_t j = 0; j + 1 < i; ++j) sigma[j] = 0;
    sigma[i - 1] = below + 1;
    --sigma[i];
    return true;
  }
  bool next(std::vector<int>& sigma) const { return next(std::span<int>(sigma)); }

 private:
  std::size_t m_;
  BinomialTable binom_;
};

}  // namespace dilated

#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dilated/error.hpp"
#include "dilated/multi_index.hpp"
#include "dilated/numeric.hpp"
#include "dilated/polynomial.hpp"

namespace dilated {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline void require_distinct_primes(std::span<const std::uint64_t> primes) {
  for (std::size_t i = 0; i < primes.size(); ++i) {
    require(is_prime(primes[i]), ErrorKind::InvalidArgument, std::to_string(primes[i]) + " is not prime");
    for (std::size_t j = 0; j < i; ++j)
      require(primes[i] != primes[j], ErrorKind::InvalidArgument, "primes must be distinct");
  }
}

/// A(w) = sum_{alpha in K} a(alpha) w^alpha, finitely supported on N_0^m.
class SparseSymbol {
 public:
  using Terms = std::map<MultiIndex, cplx>;

  explicit SparseSymbol(std::size_t arity) : arity_(arity) {
    require(arity >= 1, ErrorKind::InvalidArgument, "symbol arity must be at least 1");
  }
  SparseSymbol(std::size_t arity, const Terms& terms) : SparseSymbol(arity) {
    for (const auto& [k, v] : terms) add(k, v);
  }

  /// The univariate symbol a(w_1) = sum_j a_j w_1^j.
  static SparseSymbol from_univariate(const UnivariatePolynomial& a) {
    SparseSymbol s(1);
    for (std::size_t j = 0; j < a.size(); ++j) s.add(MultiIndex{static_cast<int>(j)}, a[j]);
    return s;
  }

  void add(const MultiIndex& alpha, cplx value) {
    require(alpha.arity() == arity_, ErrorKind::InvalidArgument, "term arity mismatch: " + alpha.str());
    require(alpha.nonnegative(), ErrorKind::InvalidArgument, "negative exponent in symbol term " + alpha.str());
    if (value == cplx(0.0)) return;
    terms_[alpha] += value;
    if (terms_[alpha] == cplx(0.0)) terms_.erase(alpha);
  }

  std::size_t arity() const { return arity_; }
  const Terms& terms() const { return terms_; }
  std::size_t support_size() const { return terms_.size(); }

  cplx coeff(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? cplx(0.0) : it->second;
  }
  cplx constant_term() const { return coeff(MultiIndex(arity_)); }

  const std::optional<std::vector<std::uint64_t>>& primes() const { return primes_; }
  void set_primes(std::vector<std::uint64_t> primes) {
    require(primes.size() == arity_, ErrorKind::InvalidArgument, "one prime per variable required");
    require_distinct_primes(primes);
    primes_ = std::move(primes);
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [k, v] : terms_) m = std::max(m, std::abs(v));
    return m;
  }

  /// sqrt(sum |a(alpha)|^2), the H^2 norm of A.
  double l2_norm() const {
    std::vector<double> sq;
    for (const auto& [k, v] : terms_) sq.push_back(std::norm(v));
    return std::sqrt(pairwise_sum(sq));
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [k, v] : terms_) d = std::max(d, k.total());
    return d;
  }

  MultiIndex degree_box() const {
    MultiIndex d(arity_);
    for (const auto& [k, v] : terms_)
      for (std::size_t j = 0; j < arity_; ++j) d[j] = std::max(d[j], k[j]);
    return d;
  }

  cplx operator()(std::span<const cplx> w) const {
    require(w.size() == arity_, ErrorKind::InvalidArgument, "evaluation point arity mismatch");
    cplx acc = 0.0;
    for (const auto& [k, v] : terms_) {
      cplx mono = v;
      for (std::size_t j = 0; j < arity_; ++j)
        for (int e = 0; e < k[j]; ++e) mono *= w[j];
      acc += mono;
    }
    return acc;
  }

  /// dA/dw_j at w.
  cplx partial(std::span<const cplx> w, std::size_t j) const {
    cplx acc = 0.0;
    for (const auto& [k, v] : terms_) {
      if (k[j] == 0) continue;
      cplx mono = v * static_cast<double>(k[j]);
      for (std::size_t i = 0; i < arity_; ++i) {
        const int e = i == j ? k[i] - 1 : k[i];
        for (int r = 0; r < e; ++r) mono *= w[i];
      }
      acc += mono;
    }
    return acc;
  }

  std::string str() const {
    std::string s;
    for (const auto& [k, v] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + std::to_string(v.real()) + (v.imag() != 0.0 ? "+" + std::to_string(v.imag()) + "i" : "") + ")w^" +
           k.str();
    }
    return s.empty() ? "0" : s;
  }

 private:
  std::size_t arity_;
  Terms terms_;
  std::optional<std::vector<std::uint64_t>> primes_;
};

/// Example symbol A(w) = 1 - sum_k c_k w_k with c_k > 0, sum c_k = 1.
struct EStarSymbol {
  std::vector<double> weights;

  static EStarSymbol uniform(std::size_t m) { return {std::vector<double>(m, 1.0 / static_cast<double>(m))}; }

  SparseSymbol symbol() const {
    require(!weights.empty(), ErrorKind::InvalidArgument, "E* needs at least one weight");
    double sum = 0.0;
    for (double c : weights) {
      require(c > 0.0, ErrorKind::InvalidArgument, "E* weights must be positive");
      sum += c;
    }
    require(std::abs(sum - 1.0) <= 1e-12, ErrorKind::InvalidArgument, "E* weights must sum to 1");
    const std::size_t m = weights.size();
    SparseSymbol s(m);
    s.add(MultiIndex(m), 1.0);
    for (std::size_t k = 0; k < m; ++k) s.add(MultiIndex::unit(m, k), -weights[k]);
    return s;
  }
};

}  // namespace dilated

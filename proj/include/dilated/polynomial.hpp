#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

#include "dilated/error.hpp"
#include "dilated/numeric.hpp"

namespace dilated {

/// Dense univariate polynomial a(z) = sum_j a_j z^j with complex coefficients.
class UnivariatePolynomial {
 public:
  UnivariatePolynomial() : coeffs_{cplx(1.0)} {}
  explicit UnivariatePolynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(cplx(0.0));
  }
  UnivariatePolynomial(std::initializer_list<cplx> coeffs) : UnivariatePolynomial(std::vector<cplx>(coeffs)) {}

  static UnivariatePolynomial constant(cplx c) { return UnivariatePolynomial(std::vector<cplx>{c}); }

  /// lead * prod (z - root)
  static UnivariatePolynomial from_roots(std::span<const cplx> roots, cplx lead = 1.0) {
    std::vector<cplx> c{lead};
    for (const cplx& r : roots) {
      std::vector<cplx> next(c.size() + 1, cplx(0.0));
      for (std::size_t j = 0; j < c.size(); ++j) {
        next[j + 1] += c[j];
        next[j] -= r * c[j];
      }
      c = std::move(next);
    }
    return UnivariatePolynomial(std::move(c));
  }

  std::size_t degree() const { return coeffs_.size() - 1; }
  std::size_t size() const { return coeffs_.size(); }
  const cplx& operator[](std::size_t j) const { return coeffs_[j]; }
  std::span<const cplx> coeffs() const { return coeffs_; }

  cplx leading() const { return coeffs_.back(); }
  cplx constant_term() const { return coeffs_.front(); }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  cplx operator()(cplx z) const {
    cplx acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// sum_j |a_j| |z|^j, the natural scale for rounding error in a(z).
  double abs_bound(double r) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
  }

  UnivariatePolynomial derivative(std::size_t k = 1) const {
    if (k > degree()) return constant(0.0);
    std::vector<cplx> d(coeffs_.size() - k);
    for (std::size_t j = k; j < coeffs_.size(); ++j) {
      double f = 1.0;
      for (std::size_t i = 0; i < k; ++i) f *= static_cast<double>(j - i);
      d[j - k] = f * coeffs_[j];
    }
    return UnivariatePolynomial(std::move(d));
  }

  friend UnivariatePolynomial operator*(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
    std::vector<cplx> c(a.size() + b.size() - 1, cplx(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return UnivariatePolynomial(std::move(c));
  }

  UnivariatePolynomial scaled(cplx s) const {
    std::vector<cplx> c(coeffs_);
    for (cplx& x : c) x *= s;
    return UnivariatePolynomial(std::move(c));
  }

  /// a_0 != 0, a_m != 0 and m >= 1: the standing assumption of every analysis.
  void require_analyzable() const {
    require(degree() >= 1, ErrorKind::DegenerateInput, "polynomial degree must be at least 1");
    require(coeffs_.front() != cplx(0.0), ErrorKind::DegenerateInput, "constant coefficient a_0 is zero");
    require(coeffs_.back() != cplx(0.0), ErrorKind::DegenerateInput, "leading coefficient a_m is zero");
  }

 private:
  std::vector<cplx> coeffs_;
};

/// Largest coefficientwise difference, relative to the larger coefficient scale.
inline double relative_coeff_error(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
  const std::size_t n = std::max(a.size(), b.size());
  const double scale = std::max({a.max_abs_coeff(), b.max_abs_coeff(), std::numeric_limits<double>::min()});
  double err = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx x = j < a.size() ? a[j] : cplx(0.0);
    const cplx y = j < b.size() ? b[j] : cplx(0.0);
    err = std::max(err, std::abs(x - y));
  }
  return err / scale;
}

}  // namespace dilated

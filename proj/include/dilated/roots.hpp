#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dilated/error.hpp"
#include "dilated/numeric.hpp"
#include "dilated/polynomial.hpp"

namespace dilated {

inline constexpr std::size_t kMaxSupportedDegree = 64;

enum class ModulusClass { Inner, Unit, Outer };

constexpr const char* to_string(ModulusClass c) noexcept {
  switch (c) {
    case ModulusClass::Inner: return "F_minus";
    case ModulusClass::Unit: return "F_zero";
    case ModulusClass::Outer: return "F_plus";
  }
  return "?";
}

struct ClassifiedRoot {
  cplx location;
  int multiplicity = 1;
  double modulus_margin = 0.0;  // |alpha| - 1
  ModulusClass tag = ModulusClass::Unit;
  double residual = 0.0;        // |a(alpha)|
};

/// Zeros of a(z) partitioned by modulus: inside, on, outside the unit circle.
struct RootClassification {
  std::vector<ClassifiedRoot> roots;
  std::optional<int> kappa_star;  // set exactly when every root is unimodular
  std::optional<double> delta;    // 1 + 2 delta = min |alpha| over the outer roots
  double tolerance_used = 0.0;
  std::size_t degree = 0;
  std::vector<Warning> warnings;

  std::vector<ClassifiedRoot> with_tag(ModulusClass tag) const {
    std::vector<ClassifiedRoot> out;
    for (const auto& r : roots)
      if (r.tag == tag) out.push_back(r);
    return out;
  }
  bool has(ModulusClass tag) const {
    return std::any_of(roots.begin(), roots.end(), [tag](const auto& r) { return r.tag == tag; });
  }
  int total_multiplicity() const {
    int s = 0;
    for (const auto& r : roots) s += r.multiplicity;
    return s;
  }
};

namespace detail {

struct AberthRun {
  std::vector<cplx> z;
  bool converged = false;
};

inline AberthRun aberth(const UnivariatePolynomial& p, std::vector<cplx> z, int max_iter) {
  const UnivariatePolynomial dp = p.derivative();
  const std::size_t n = z.size();
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<bool> done(n, false);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool all_done = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      const cplx pv = p(z[k]);
      if (std::abs(pv) <= 8.0 * eps * static_cast<double>(p.size()) * p.abs_bound(std::abs(z[k]))) {
        done[k] = true;
        continue;
      }
      all_done = false;
      const cplx dv = dp(z[k]);
      if (dv == cplx(0.0)) {
        z[k] += cplx(1e-3, 1e-3) * (1.0 + std::abs(z[k]));
        continue;
      }
      const cplx ratio = pv / dv;
      cplx sum = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      const cplx w = ratio / (1.0 - ratio * sum);
      z[k] -= w;
      if (std::abs(w) <= eps * std::abs(z[k])) done[k] = true;
    }
    if (all_done) return {std::move(z), true};
  }
  const bool ok = std::all_of(done.begin(), done.end(), [](bool b) { return b; });
  return {std::move(z), ok};
}

inline std::vector<cplx> circle_starts(const UnivariatePolynomial& p, double radius_factor, double phase) {
  const std::size_t m = p.degree();
  const double r = radius_factor * std::pow(std::abs(p.constant_term() / p.leading()), 1.0 / static_cast<double>(m));
  std::vector<cplx> z(m);
  for (std::size_t k = 0; k < m; ++k)
    z[k] = std::polar(r, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m) + phase);
  return z;
}

inline std::vector<cplx> companion_eigenvalues(const UnivariatePolynomial& p) {
  const std::size_t m = p.degree();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 1; i < m; ++i) c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < m; ++i) c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m - 1)) = -p[i] / p.leading();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(c, false);
  require(solver.info() == Eigen::Success, ErrorKind::NonConvergence, "companion eigensolve failed");
  std::vector<cplx> z(m);
  for (std::size_t i = 0; i < m; ++i) z[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
  return z;
}

inline double residual_bound(const UnivariatePolynomial& p, cplx alpha) {
  return 1e-8 * p.max_abs_coeff() * std::pow(1.0 + std::abs(alpha), static_cast<double>(p.degree()));
}

/// |a^(k)(z)| relative to the rounding scale of the k-th derivative.
inline double relative_derivative(const UnivariatePolynomial& p, std::size_t k, cplx z) {
  const UnivariatePolynomial d = p.derivative(k);
  const double scale = d.abs_bound(std::abs(z));
  return scale > 0.0 ? std::abs(d(z)) / scale : 0.0;
}

/// Radius within which the computed copies of a mu-fold root scatter under
/// double rounding: (c * eps * sum|a_j||z|^j * mu! / |a^(mu)(z)|)^(1/mu).
inline double multiple_root_spread(const UnivariatePolynomial& p, std::size_t mu, cplx z) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double dmu = std::abs(p.derivative(mu)(z));
  if (dmu == 0.0) return std::numeric_limits<double>::infinity();
  const double fact = std::tgamma(static_cast<double>(mu) + 1.0);
  return std::pow(1e3 * eps * p.abs_bound(std::abs(z)) * fact / dmu, 1.0 / static_cast<double>(mu));
}

inline bool derivative_check(const UnivariatePolynomial& p, std::size_t mu, cplx z) {
  for (std::size_t k = 0; k < mu; ++k)
    if (relative_derivative(p, k, z) > 1e-4) return false;
  return relative_derivative(p, mu, z) > 1e-10;
}

struct Cluster {
  std::vector<cplx> members;
  cplx centroid() const {
    cplx s = 0.0;
    for (const cplx& m : members) s += m;
    return s / static_cast<double>(members.size());
  }
};

inline std::vector<Cluster> cluster_roots(const UnivariatePolynomial& p, const std::vector<cplx>& z, double radius) {
  // single linkage at the fixed radius
  std::vector<std::size_t> parent(z.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (std::abs(z[i] - z[j]) <= radius) parent[find(i)] = find(j);
  std::vector<Cluster> clusters;
  std::vector<long> slot(z.size(), -1);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<std::size_t>(slot[r])].members.push_back(z[i]);
  }

  // Higher multiplicities scatter beyond the fixed radius (error ~ eps^(1/mu)).
  // Merge the closest pair while the merged group stays inside its predicted
  // scatter radius and passes the derivative test.
  std::vector<std::pair<std::size_t, std::size_t>> rejected;
  for (;;) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i)
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        if (std::find(rejected.begin(), rejected.end(), std::pair{i, j}) != rejected.end()) continue;
        const double d = std::abs(clusters[i].centroid() - clusters[j].centroid());
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    if (!std::isfinite(best) || best > 1e-2) break;
    Cluster merged = clusters[bi];
    merged.members.insert(merged.members.end(), clusters[bj].members.begin(), clusters[bj].members.end());
    const cplx c = merged.centroid();
    const std::size_t mu = merged.members.size();
    const double spread = std::max(radius, 10.0 * multiple_root_spread(p, mu, c));
    bool inside = true;
    for (const cplx& m : merged.members) inside = inside && std::abs(m - c) <= spread;
    if (!inside || !derivative_check(p, mu, c)) {
      rejected.emplace_back(bi, bj);
      continue;
    }
    clusters[bi] = std::move(merged);
    clusters.erase(clusters.begin() + static_cast<long>(bj));
    rejected.clear();
  }
  return clusters;
}

/// Newton on a^(mu-1), which has a simple zero at a mu-fold root of a.
inline cplx polish_multiple(const UnivariatePolynomial& p, std::size_t mu, cplx z, double max_move) {
  if (mu < 2) return z;
  const UnivariatePolynomial f = p.derivative(mu - 1);
  const UnivariatePolynomial df = p.derivative(mu);
  const cplx start = z;
  for (int it = 0; it < 8; ++it) {
    const cplx d = df(z);
    if (d == cplx(0.0)) break;
    const cplx next = z - f(z) / d;
    if (std::abs(next - start) > max_move || std::abs(f(next)) >= std::abs(f(z))) break;
    z = next;
  }
  return z;
}

}  // namespace detail

/// All zeros of a polynomial with repetition: Aberth-Ehrlich iteration with a
/// ladder of perturbed starts, then companion-matrix eigenvalues as fallback.
inline std::vector<cplx> polynomial_roots(const UnivariatePolynomial& poly) {
  poly.require_analyzable();
  require(poly.degree() <= kMaxSupportedDegree, ErrorKind::SizeLimit, "polynomial degree exceeds 64");
  const UnivariatePolynomial p = poly.scaled(1.0 / poly.max_abs_coeff());
  if (p.degree() == 1) return {-p[0] / p[1]};

  constexpr double kRadius[] = {1.0, 1.3, 0.7, 2.0, 0.5};
  for (int attempt = 0; attempt < 5; ++attempt) {
    const double phase = 0.7 / static_cast<double>(p.degree()) + 0.31 * attempt;
    auto run = detail::aberth(p, detail::circle_starts(p, kRadius[attempt], phase), 1000);
    if (run.converged) return run.z;
  }
  auto run = detail::aberth(p, detail::companion_eigenvalues(p), 200);
  if (run.converged) return run.z;
  // Companion eigenvalues are backward stable even when Aberth stalls.
  std::vector<cplx> z = detail::companion_eigenvalues(p);
  for (const cplx& r : z)
    if (std::abs(p(r)) > detail::residual_bound(p, r))
      throw Error(ErrorKind::NonConvergence, "root iteration failed after the retry ladder");
  return z;
}

/// Partition of Z(a) into F-minus / F-zero / F-plus with multiplicities.
inline RootClassification classify_roots(const UnivariatePolynomial& poly, double tol = 1e-8) {
  require(tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
  poly.require_analyzable();
  const UnivariatePolynomial p = poly.scaled(1.0 / poly.max_abs_coeff());
  const std::vector<cplx> raw = polynomial_roots(p);
  auto clusters = detail::cluster_roots(p, raw, 1e-6);

  RootClassification out;
  out.tolerance_used = tol;
  out.degree = poly.degree();
  for (const auto& cl : clusters) {
    const std::size_t mu = cl.members.size();
    double max_dev = 0.0;
    const cplx c0 = cl.centroid();
    for (const cplx& m : cl.members) max_dev = std::max(max_dev, std::abs(m - c0));
    const cplx c = detail::polish_multiple(p, mu, c0, std::max(1e-12, max_dev));
    ClassifiedRoot r;
    r.location = c;
    r.multiplicity = static_cast<int>(mu);
    r.modulus_margin = std::abs(c) - 1.0;
    r.residual = std::abs(poly(c));
    if (std::abs(p(c)) > detail::residual_bound(p, c))
      throw Error(ErrorKind::NonConvergence, "root residual above bound at " + std::to_string(c.real()) + "+" +
                                                 std::to_string(c.imag()) + "i");
    if (mu >= 2 && !detail::derivative_check(p, mu, c))
      out.warnings.push_back({"MultiplicityCheck", "cluster of size " + std::to_string(mu) +
                                                       " failed the derivative magnitude test"});
    const double dev = std::abs(r.modulus_margin);
    if (dev <= tol)
      r.tag = ModulusClass::Unit;
    else
      r.tag = r.modulus_margin < 0.0 ? ModulusClass::Inner : ModulusClass::Outer;
    if (dev > tol && dev <= 10.0 * tol)
      out.warnings.push_back({"BoundaryWarning", "root with ||alpha|-1| = " + std::to_string(dev) +
                                                     " lies within 10x tolerance of the unit circle"});
    out.roots.push_back(r);
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a.location), mb = std::abs(b.location);
    if (ma != mb) return ma < mb;
    return std::arg(a.location) < std::arg(b.location);
  });

  if (!out.has(ModulusClass::Inner) && !out.has(ModulusClass::Outer)) {
    int k = 0;
    for (const auto& r : out.roots) k = std::max(k, r.multiplicity - 1);
    out.kappa_star = k;
  }
  if (out.has(ModulusClass::Outer)) {
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& r : out.with_tag(ModulusClass::Outer)) mn = std::min(mn, std::abs(r.location));
    out.delta = (mn - 1.0) / 2.0;
  }
  return out;
}

struct ModulusFactors {
  UnivariatePolynomial a_minus;
  UnivariatePolynomial a_zero;
  UnivariatePolynomial a_plus;
};

/// a = a_minus * a_zero * a_plus. Each factor is a product of (z - alpha)^mu;
/// the leading constant a_m rides on a_plus, or on a_zero when there are no
/// outer roots, or on a_minus when every root is inner.
inline ModulusFactors factor_by_modulus(const UnivariatePolynomial& poly, const RootClassification& cls) {
  require(static_cast<std::size_t>(cls.total_multiplicity()) == poly.degree() && cls.degree == poly.degree(),
          ErrorKind::InconsistentClassification, "classification degree does not match the polynomial");
  auto roots_of = [&](ModulusClass tag) {
    std::vector<cplx> z;
    for (const auto& r : cls.roots)
      if (r.tag == tag) z.insert(z.end(), static_cast<std::size_t>(r.multiplicity), r.location);
    return z;
  };
  const auto inner = roots_of(ModulusClass::Inner);
  const auto unit = roots_of(ModulusClass::Unit);
  const auto outer = roots_of(ModulusClass::Outer);
  const cplx lead = poly.leading();
  const bool lead_on_plus = !outer.empty();
  const bool lead_on_zero = outer.empty() && !unit.empty();
  const bool lead_on_minus = outer.empty() && unit.empty();
  ModulusFactors f{
      UnivariatePolynomial::from_roots(inner, lead_on_minus ? lead : cplx(1.0)),
      UnivariatePolynomial::from_roots(unit, lead_on_zero ? lead : cplx(1.0)),
      UnivariatePolynomial::from_roots(outer, lead_on_plus ? lead : cplx(1.0)),
  };
  return f;
}

struct NeumannSeries {
  std::vector<cplx> coeffs;  // 1/a_plus up to order N
  double decay_rate = 0.0;   // 1 / min |alpha| = 1/(1 + 2 delta); 0 for constants
  double residual = 0.0;     // max |(a_plus * coeffs)_n - delta_n0| for n <= N
};

/// Power-series inverse of an outer factor: b_0 = 1/c_0, b_n = -(sum_{j>=1} c_j b_{n-j}) / c_0.
/// Equal to the resolvent contour integral of 1/a_plus(T) on the model space.
inline NeumannSeries neumann_inverse(const UnivariatePolynomial& a_plus, std::size_t order) {
  require(a_plus.constant_term() != cplx(0.0), ErrorKind::NotOuter, "a_plus vanishes at 0");
  NeumannSeries out;
  if (a_plus.degree() >= 1) {
    require(a_plus.leading() != cplx(0.0), ErrorKind::DegenerateInput, "leading coefficient is zero");
    double mn = std::numeric_limits<double>::infinity();
    for (const cplx& r : polynomial_roots(a_plus)) mn = std::min(mn, std::abs(r));
    require(mn > 1.0, ErrorKind::NotOuter, "a_plus has a root of modulus " + std::to_string(mn) + " <= 1");
    out.decay_rate = 1.0 / mn;
  }
  const cplx c0 = a_plus.constant_term();
  out.coeffs.assign(order + 1, cplx(0.0));
  out.coeffs[0] = 1.0 / c0;
  for (std::size_t n = 1; n <= order; ++n) {
    cplx acc = 0.0;
    for (std::size_t j = 1; j <= std::min(n, a_plus.degree()); ++j) acc += a_plus[j] * out.coeffs[n - j];
    out.coeffs[n] = -acc / c0;
  }
  for (std::size_t n = 0; n <= order; ++n) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j <= std::min(n, a_plus.degree()); ++j) acc += a_plus[j] * out.coeffs[n - j];
    out.residual = std::max(out.residual, std::abs(acc - (n == 0 ? cplx(1.0) : cplx(0.0))));
  }
  return out;
}

}  // namespace dilated

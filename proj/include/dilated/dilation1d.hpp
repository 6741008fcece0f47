#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dilated/error.hpp"
#include "dilated/gram.hpp"
#include "dilated/numeric.hpp"
#include "dilated/omega.hpp"
#include "dilated/polynomial.hpp"
#include "dilated/roots.hpp"

namespace dilated {

inline constexpr std::size_t kDefaultMaxGramSize = 4096;

/// u_n = sum_j a_j e_{p^j n} in the orthonormal sine model e_n = sqrt(2/pi) sin(nx).
struct DilationSystemSpec {
  UnivariatePolynomial coeffs;
  std::uint64_t prime = 2;
  std::string label;

  void validate() const {
    coeffs.require_analyzable();
    require(is_prime(prime), ErrorKind::InvalidArgument, std::to_string(prime) + " is not prime");
  }

  /// Coefficients of u_n as a sparse sequence on N.
  std::map<std::uint64_t, cplx> element(std::uint64_t n) const {
    std::map<std::uint64_t, cplx> u;
    std::uint64_t idx = n;
    for (std::size_t j = 0; j < coeffs.size(); ++j, idx *= prime)
      if (coeffs[j] != cplx(0.0)) u[idx] += coeffs[j];
    return u;
  }
};

/// <x, y> = sum x_i conj(y_i)
inline cplx sparse_inner(const std::map<std::uint64_t, cplx>& x, const std::map<std::uint64_t, cplx>& y) {
  cplx s = 0.0;
  for (const auto& [i, v] : x) {
    auto it = y.find(i);
    if (it != y.end()) s += v * std::conj(it->second);
  }
  return s;
}

/// Gram section G(n, n') = <u_n, u_n'> for 1 <= n, n' <= N. The section splits
/// into one block per chain omega * p^k, on which G(k, k') = sum_{k+j = k'+j'} a_j conj(a_j').
inline GramSection gram_section(const DilationSystemSpec& spec, std::size_t n,
                                std::size_t max_size = kDefaultMaxGramSize) {
  spec.validate();
  require(n >= 1, ErrorKind::InvalidArgument, "section size must be at least 1");
  require(n <= max_size, ErrorKind::SizeLimit,
          "section size " + std::to_string(n) + " exceeds limit " + std::to_string(max_size));
  const auto& a = spec.coeffs;
  const std::uint64_t p = spec.prime;
  std::map<std::size_t, Matrix> by_length;
  auto toeplitz = [&](std::size_t len) {
    auto it = by_length.find(len);
    if (it != by_length.end()) return it->second;
    Matrix g = Matrix::Zero(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(len));
    for (std::size_t k = 0; k < len; ++k)
      for (std::size_t kk = 0; kk < len; ++kk)
        for (std::size_t j = 0; j < a.size(); ++j) {
          const long jj = static_cast<long>(k + j) - static_cast<long>(kk);
          if (jj >= 0 && static_cast<std::size_t>(jj) < a.size())
            g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(kk)) += a[j] * std::conj(a[static_cast<std::size_t>(jj)]);
        }
    by_length.emplace(len, g);
    return g;
  };

  GramSection out;
  out.size = n;
  for (std::uint64_t omega = 1; omega <= n; ++omega) {
    if (omega % p == 0) continue;
    GramBlock b;
    b.omega = omega;
    for (std::uint64_t idx = omega; idx <= n; idx *= p) b.positions.push_back(static_cast<std::size_t>(idx - 1));
    b.entries = toeplitz(b.positions.size());
    out.blocks.push_back(std::move(b));
  }
  // Blocks of equal length are identical, so the spectrum comes from the distinct lengths.
  out.hermitian = true;
  bool first = true;
  for (const auto& [len, g] : by_length) {
    if (!g.isApprox(g.adjoint(), 1e-14)) out.hermitian = false;
    const auto ex = hermitian_extremes(g);
    out.extremes.min = first ? ex.min : std::min(out.extremes.min, ex.min);
    out.extremes.max = first ? ex.max : std::max(out.extremes.max, ex.max);
    first = false;
  }
  return out;
}

enum class Tri { No, Yes, Unknown };

constexpr const char* to_string(Tri t) noexcept {
  switch (t) {
    case Tri::No: return "no";
    case Tri::Yes: return "yes";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

struct BasisVerdict {
  bool basis = false;
  Tri complete = Tri::Unknown;
  bool minimal = true;
  std::vector<std::string> reasons;
  RootClassification classification;
  std::optional<GramSection> evidence;
};

/// Verdicts from the root partition: basis iff no roots in the closed disk,
/// incomplete when a root lies inside, always minimal. An optional Gram
/// section is attached as evidence only.
inline BasisVerdict basis_verdict(const DilationSystemSpec& spec, double tol = 1e-8, std::size_t evidence_n = 0) {
  spec.validate();
  BasisVerdict v;
  v.classification = classify_roots(spec.coeffs, tol);
  const auto& c = v.classification;
  const bool inner = c.has(ModulusClass::Inner);
  const bool unit = c.has(ModulusClass::Unit);
  v.basis = !inner && !unit;
  v.complete = inner ? Tri::No : Tri::Yes;
  v.minimal = true;
  if (v.basis)
    v.reasons.push_back("F_minus and F_zero are empty: a(T) is invertible and U is a Riesz basis");
  if (inner)
    v.reasons.push_back("F_minus is nonempty: the reproducing kernel at an inner root annihilates U, so U is incomplete");
  if (!inner && unit)
    v.reasons.push_back("roots on the unit circle (F_zero nonempty, F_minus empty): U is complete but not a basis");
  if (c.kappa_star)
    v.reasons.push_back("all roots unimodular, kappa* = " + std::to_string(*c.kappa_star) +
                        ": dual norms grow like (log k)^(kappa*+1/2)");
  v.reasons.push_back("a_0 != 0: explicit biorthogonal functionals exist, U is minimal");
  if (evidence_n > 0) v.evidence = gram_section(spec, evidence_n);
  return v;
}

/// Normalized reproducing kernel at an inner root alpha0 on chain omega = 1:
/// coefficient conj(alpha0)^k at index p^k, k = 0..N.
struct Witness {
  cplx root;
  std::uint64_t omega = 1;
  std::size_t truncation = 0;
  std::vector<cplx> coeffs;
  std::size_t tested_up_to = 0;
  double max_residual = 0.0;
  double residual_bound = 0.0;

  std::map<std::uint64_t, cplx> as_sequence(std::uint64_t p) const {
    std::map<std::uint64_t, cplx> g;
    std::uint64_t idx = omega;
    for (const cplx& c : coeffs) {
      g[idx] = c;
      if (idx > std::numeric_limits<std::uint64_t>::max() / p) break;
      idx *= p;
    }
    return g;
  }
};

/// Incompleteness certificate for an inner root. which_root indexes the inner
/// roots sorted by modulus; by default the smallest one is used.
inline Witness incompleteness_witness(const DilationSystemSpec& spec, std::optional<std::size_t> which_root,
                                      std::size_t truncation, std::size_t n_test = 64, double tol = 1e-8) {
  spec.validate();
  require(truncation >= 1, ErrorKind::InvalidArgument, "truncation must be at least 1");
  const auto cls = classify_roots(spec.coeffs, tol);
  const auto inner = cls.with_tag(ModulusClass::Inner);
  require(!inner.empty(), ErrorKind::NoInnerRoot, "F_minus is empty; the system has no kernel witness");
  const std::size_t pick = which_root.value_or(0);
  require(pick < inner.size(), ErrorKind::InvalidArgument, "root index out of range");
  const cplx alpha = inner[pick].location;
  require(std::log(static_cast<double>(spec.prime)) * static_cast<double>(truncation) < 63.0 * std::log(2.0),
          ErrorKind::SizeLimit, "truncation overflows 64-bit indices");

  Witness w;
  w.root = alpha;
  w.truncation = truncation;
  w.coeffs.resize(truncation + 1);
  cplx pw = 1.0;
  std::vector<double> sq;
  for (std::size_t k = 0; k <= truncation; ++k) {
    w.coeffs[k] = std::conj(pw);
    sq.push_back(std::norm(pw));
    pw *= alpha;
  }
  const double norm = std::sqrt(pairwise_sum(sq));
  for (cplx& c : w.coeffs) c /= norm;

  const auto g = w.as_sequence(spec.prime);
  w.tested_up_to = n_test;
  for (std::uint64_t n = 1; n <= n_test; ++n)
    w.max_residual = std::max(w.max_residual, std::abs(sparse_inner(spec.element(n), g)));
  const double r = std::abs(alpha);
  // tail of the truncated kernel plus the root's own residual |a(alpha0)|
  w.residual_bound = std::pow(r, static_cast<double>(truncation)) / std::sqrt(1.0 - r * r) *
                         spec.coeffs.max_abs_coeff() * static_cast<double>(spec.coeffs.size()) +
                     std::abs(spec.coeffs(alpha));
  return w;
}

/// Taylor coefficients of 1/a(z), streamed: b_0 = 1/a_0, b_n = -(sum_{j>=1} a_j b_{n-j}) / a_0.
class ReciprocalSeries {
 public:
  explicit ReciprocalSeries(const UnivariatePolynomial& a) : a_(a), history_(a.size(), cplx(0.0)) {
    require(a.constant_term() != cplx(0.0), ErrorKind::ZeroConstantTerm, "a_0 = 0: 1/a has no Taylor series");
  }

  cplx next() {
    cplx acc = n_ == 0 ? cplx(1.0) : cplx(0.0);
    for (std::size_t j = 1; j < a_.size() && j <= n_; ++j) acc -= a_[j] * history_[(n_ - j) % history_.size()];
    const cplx b = acc / a_.constant_term();
    history_[n_ % history_.size()] = b;
    ++n_;
    return b;
  }

 private:
  UnivariatePolynomial a_;
  std::vector<cplx> history_;
  std::size_t n_ = 0;
};

inline std::vector<cplx> reciprocal_coefficients(const UnivariatePolynomial& a, std::size_t count) {
  ReciprocalSeries s(a);
  std::vector<cplx> b(count);
  for (auto& x : b) x = s.next();
  return b;
}

/// ‖Phi_{omega p^tau}‖^2 = sum_{sigma <= tau} |b(sigma)|^2.
struct DualChainNorms {
  std::uint64_t omega = 1;
  std::vector<double> norm_sq;  // index tau
  std::optional<std::size_t> overflow_at;

  std::size_t tau_max() const { return norm_sq.empty() ? 0 : norm_sq.size() - 1; }
  double norm(std::size_t tau) const { return std::sqrt(norm_sq.at(tau)); }
};

/// Every chain N(omega) carries an isometric copy of the same H^2 model, so the
/// values depend on tau only; omega is recorded for reporting.
inline DualChainNorms dual_chain_norms(const DilationSystemSpec& spec, std::size_t tau_max, std::uint64_t omega = 1) {
  spec.validate();
  require(omega >= 1 && omega % spec.prime != 0, ErrorKind::InvalidArgument, "omega must be coprime to the prime");
  DualChainNorms out;
  out.omega = omega;
  out.norm_sq.reserve(tau_max + 1);
  ReciprocalSeries series(spec.coeffs);
  double sum = 0.0, comp = 0.0;  // Neumaier compensation
  for (std::size_t tau = 0; tau <= tau_max; ++tau) {
    const double term = std::norm(series.next());
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    const double value = sum + comp;
    if (!std::isfinite(value)) {
      out.overflow_at = tau;
      break;
    }
    out.norm_sq.push_back(value);
  }
  return out;
}

struct ExponentFit {
  double exponent = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t tau_lo = 0;
  std::size_t tau_hi = 0;
  double r_squared = 0.0;
};

/// Slope of log ‖Phi_tau‖ against log tau on the upper (logarithmic) half of
/// [tau_min, tau_max]. Throws BoundedSequence when the norms have plateaued.
inline ExponentFit exponent_fit(const DualChainNorms& norms, std::size_t tau_min = 100) {
  const std::size_t tau_max = norms.tau_max();
  require(tau_min >= 1 && tau_max >= 4 * tau_min, ErrorKind::InvalidArgument,
          "exponent fit needs tau_max >= 4 tau_min");
  const auto lo = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(tau_min) * static_cast<double>(tau_max))));
  const double growth = norms.norm(tau_max) / norms.norm(lo) - 1.0;
  if (growth < 1e-3)
    throw Error(ErrorKind::BoundedSequence, "dual norms plateau at " + std::to_string(norms.norm(tau_max)));
  std::vector<double> x, y;
  constexpr int kSamples = 256;
  std::size_t last = 0;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = std::exp(std::log(static_cast<double>(lo)) +
                              (std::log(static_cast<double>(tau_max)) - std::log(static_cast<double>(lo))) * i / kSamples);
    const auto tau = std::min(tau_max, static_cast<std::size_t>(std::llround(t)));
    if (!x.empty() && tau == last) continue;
    last = tau;
    x.push_back(std::log(static_cast<double>(tau)));
    y.push_back(std::log(norms.norm(tau)));
  }
  const auto fit = fit_line(x, y);
  ExponentFit out;
  out.exponent = fit.slope;
  out.ci_low = fit.slope - 1.96 * fit.slope_stderr;
  out.ci_high = fit.slope + 1.96 * fit.slope_stderr;
  out.tau_lo = lo;
  out.tau_hi = tau_max;
  out.r_squared = fit.r_squared;
  return out;
}

/// Biorthogonal functional for u_n, n = omega p^tau, acting bilinearly:
/// Phi_n(x) = sum_{sigma <= tau} b(sigma) x_{omega p^(tau - sigma)}.
struct ChainDual {
  std::uint64_t n = 1;
  std::uint64_t omega = 1;
  std::size_t tau = 0;
  std::map<std::uint64_t, cplx> coeffs;

  cplx operator()(const std::map<std::uint64_t, cplx>& x) const {
    cplx s = 0.0;
    for (const auto& [i, v] : coeffs) {
      auto it = x.find(i);
      if (it != x.end()) s += v * it->second;
    }
    return s;
  }
};

struct MinimalityDuals {
  std::vector<ChainDual> duals;  // duals[n - 1]
  double max_residual = 0.0;
};

/// Duals for n <= n_max with residuals max |Phi_k(u_n) - delta_kn| over k, n <= n_max.
/// trunc caps the number of series coefficients b(sigma) used (0 = as many as needed).
inline MinimalityDuals minimality_duals(const DilationSystemSpec& spec, std::uint64_t n_max, std::size_t trunc = 0) {
  require(spec.coeffs.size() >= 1 && spec.coeffs.constant_term() != cplx(0.0), ErrorKind::ZeroConstantTerm,
          "a_0 = 0: the dual construction needs a nonzero constant term");
  spec.validate();
  require(n_max >= 1, ErrorKind::InvalidArgument, "n_max must be at least 1");
  const std::uint64_t p = spec.prime;
  const std::uint64_t primes[] = {p};
  std::size_t tau_top = 0;
  for (std::uint64_t q = p; q <= n_max; q *= p) ++tau_top;
  const std::size_t count = trunc == 0 ? tau_top + 1 : trunc;
  const auto b = reciprocal_coefficients(spec.coeffs, count);

  MinimalityDuals out;
  out.duals.reserve(n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const auto d = omega_decompose(n, primes);
    ChainDual phi;
    phi.n = n;
    phi.omega = d.omega;
    phi.tau = static_cast<std::size_t>(d.alpha[0]);
    for (std::size_t sigma = 0; sigma <= phi.tau && sigma < b.size(); ++sigma) {
      std::uint64_t idx = d.omega;
      for (std::size_t e = 0; e < phi.tau - sigma; ++e) idx *= p;
      phi.coeffs[idx] += b[sigma];
    }
    out.duals.push_back(std::move(phi));
  }
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const auto u = spec.element(n);
    for (const auto& phi : out.duals) {
      const cplx target = phi.n == n ? cplx(1.0) : cplx(0.0);
      out.max_residual = std::max(out.max_residual, std::abs(phi(u) - target));
    }
  }
  return out;
}

}  // namespace dilated

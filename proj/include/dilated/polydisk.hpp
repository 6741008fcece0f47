#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dilated/coefficient_series.hpp"
#include "dilated/dilation1d.hpp"
#include "dilated/error.hpp"
#include "dilated/gram.hpp"
#include "dilated/linalg.hpp"
#include "dilated/multi_index.hpp"
#include "dilated/numeric.hpp"
#include "dilated/symbol.hpp"

namespace dilated {

/// Laurent polynomial in m variables, exponent -> coefficient.
using LaurentMap = std::map<MultiIndex, cplx>;

/// Taylor coefficients of 1/A on the box 0 <= sigma <= upper, numbered by BoxIndexer.
/// Box numbering is linear, so index(sigma - beta) = index(sigma) - index(beta).
inline std::vector<cplx> reciprocal_box(const SparseSymbol& a, const MultiIndex& upper) {
  const cplx a0 = a.constant_term();
  require(a0 != cplx(0.0), ErrorKind::ZeroConstantTerm, "A(0) = 0: 1/A has no Taylor expansion at 0");
  require(upper.arity() == a.arity(), ErrorKind::InvalidArgument, "box arity mismatch");
  const BoxIndexer box(upper);
  struct Term {
    MultiIndex beta;
    std::size_t offset;
    cplx value;
  };
  std::vector<Term> terms;
  for (const auto& [beta, v] : a.terms())
    if (!beta.is_zero() && beta.leq(upper)) terms.push_back({beta, box.index(beta), v});
  std::vector<cplx> b(box.size());
  std::size_t k = 0;
  for_each_in_box(upper, [&](const MultiIndex& sigma) {
    cplx acc = k == 0 ? cplx(1.0) : cplx(0.0);
    for (const Term& t : terms)
      if (t.beta.leq(sigma)) acc -= t.value * b[k - t.offset];
    b[k++] = acc / a0;
  });
  return b;
}

/// <f, g> = (2 pi)^{-m} int f g dt without conjugation: the w^0 coefficient of f g.
inline cplx bilinear_pairing(const LaurentMap& f, const LaurentMap& g) {
  cplx s = 0.0;
  for (const auto& [k, v] : f) {
    auto it = g.find(-k);
    if (it != g.end()) s += v * it->second;
  }
  return s;
}

/// v(alpha) = w^alpha A(w).
inline LaurentMap system_element(const SparseSymbol& a, const MultiIndex& alpha) {
  LaurentMap v;
  for (const auto& [beta, c] : a.terms()) v[alpha + beta] = c;
  return v;
}

/// Phi_tau(w) = sum_{sigma <= tau} b(sigma) w^{sigma - tau}.
struct DualFunctional {
  MultiIndex tau;
  LaurentMap terms;  // keyed by sigma - tau
  double norm_sq = 0.0;

  double norm() const { return std::sqrt(norm_sq); }
  cplx operator()(const LaurentMap& f) const { return bilinear_pairing(terms, f); }
};

inline DualFunctional dual_functional(const SparseSymbol& a, const MultiIndex& tau) {
  require(tau.nonnegative(), ErrorKind::InvalidArgument, "tau must be nonnegative");
  const auto b = reciprocal_box(a, tau);
  DualFunctional phi;
  phi.tau = tau;
  std::vector<double> sq;
  sq.reserve(b.size());
  std::size_t k = 0;
  for_each_in_box(tau, [&](const MultiIndex& sigma) {
    phi.terms[sigma - tau] = b[k];
    sq.push_back(std::norm(b[k]));
    ++k;
  });
  phi.norm_sq = pairwise_sum(sq);
  return phi;
}

/// max |<Phi_tau, v(alpha)> - delta(alpha, tau)| over alpha, tau in the box [0, upper].
inline double biorthogonality_suite(const SparseSymbol& a, const MultiIndex& upper) {
  std::vector<DualFunctional> duals;
  std::vector<LaurentMap> elements;
  for_each_in_box(upper, [&](const MultiIndex& t) {
    duals.push_back(dual_functional(a, t));
    elements.push_back(system_element(a, t));
  });
  std::vector<double> worst(duals.size(), 0.0);
  parallel_for(duals.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < elements.size(); ++j) {
        const cplx target = i == j ? cplx(1.0) : cplx(0.0);
        worst[i] = std::max(worst[i], std::abs(duals[i](elements[j]) - target));
      }
  }, 8);
  return worst.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
}

struct ShellSums {
  std::vector<double> s;        // s_n = sum_{|sigma| = n} |b(sigma)|^2
  std::vector<double> partial;  // S_n = s_0 + ... + s_n
  LinearFit fit;                // log s_n against log n on [N/4, N]
  std::size_t fit_lo = 0;
  std::size_t fit_hi = 0;

  std::size_t cutoff() const { return s.empty() ? 0 : s.size() - 1; }
  double slope() const { return fit.slope; }
};

inline ShellSums shell_sums_from(std::vector<double> s) {
  ShellSums out;
  out.s = std::move(s);
  out.partial.resize(out.s.size());
  double acc = 0.0;
  for (std::size_t n = 0; n < out.s.size(); ++n) out.partial[n] = acc += out.s[n];
  const std::size_t n_max = out.cutoff();
  out.fit_lo = std::max<std::size_t>(1, n_max / 4);
  out.fit_hi = n_max;
  std::vector<double> x, y;
  for (std::size_t n = out.fit_lo; n <= n_max; ++n)
    if (out.s[n] > 0.0 && std::isfinite(out.s[n])) {
      x.push_back(std::log(static_cast<double>(n)));
      y.push_back(std::log(out.s[n]));
    }
  if (x.size() >= 2) out.fit = fit_line(x, y);
  return out;
}

/// Shell sums of 1/A through total degree n_max; streams shells when the full table is too large.
inline ShellSums shell_sums(const SparseSymbol& a, std::size_t n_max, std::optional<SeriesMode> mode = std::nullopt) {
  SeriesMode use = SeriesMode::Streaming;
  if (mode) {
    use = *mode;
  } else {
    const ShellIndexer idx(a.arity(), n_max + 1);
    std::uint64_t total = 0;
    for (std::size_t n = 0; n <= n_max && total <= kMaxFullTableEntries; ++n) total += idx.shell_size(n);
    use = total <= kMaxFullTableEntries / 10 ? SeriesMode::Full : SeriesMode::Streaming;
  }
  const CoefficientTable table(a, n_max, use);
  return shell_sums_from(table.shell_sums());
}

enum class H2Membership { Member, NonMember, Inconclusive };

constexpr const char* to_string(H2Membership v) noexcept {
  switch (v) {
    case H2Membership::Member: return "member";
    case H2Membership::NonMember: return "non-member";
    case H2Membership::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct H2Options {
  double margin = 0.1;                 // slope margin around -1
  double tail_tolerance = 0.05;        // (S_N - S_{N/2}) / S_N for membership
  double divergence_threshold = 1e12;  // S_N beyond this is divergence
  double log_fit_r2 = 0.99;            // S_n linear in log n
  double increment_ratio = 0.9;        // (S_N - S_{N/2}) / (S_{N/2} - S_{N/4})
};

struct H2Verdict {
  H2Membership verdict = H2Membership::Inconclusive;
  double slope = 0.0;
  double cauchy_tail = 0.0;
  double log_fit_r2 = 0.0;
  double increment_ratio = 0.0;
  double total = 0.0;
  std::optional<double> extrapolated_total;  // S_N plus the power-law tail, when convergent
  std::vector<std::string> reasons;
};

/// Membership of 1/A in H^2 from the decay of s_n: summable when s_n ~ n^slope with slope < -1.
inline H2Verdict h2_verdict(const ShellSums& sh, const H2Options& opt = {}) {
  const std::size_t n = sh.cutoff();
  require(n >= 8, ErrorKind::InvalidArgument, "h2 verdict needs a cutoff of at least 8");
  H2Verdict v;
  v.total = sh.partial[n];
  v.slope = sh.fit.slope;
  const double s_half = sh.partial[n / 2];
  const double s_quarter = sh.partial[n / 4];
  v.cauchy_tail = v.total > 0.0 ? (v.total - s_half) / v.total : 0.0;
  v.increment_ratio = s_half > s_quarter ? (v.total - s_half) / (s_half - s_quarter) : 0.0;
  {
    std::vector<double> x, y;
    for (std::size_t k = std::max<std::size_t>(1, n / 4); k <= n; ++k) {
      x.push_back(std::log(static_cast<double>(k)));
      y.push_back(sh.partial[k]);
    }
    v.log_fit_r2 = fit_line(x, y).r_squared;
  }
  bool zero_tail = true;
  for (std::size_t k = sh.fit_lo; k <= n; ++k) zero_tail = zero_tail && !(sh.s[k] > 0.0);

  if (zero_tail) {
    v.verdict = H2Membership::Member;
    v.reasons.push_back("shell sums vanish (or underflow) on [N/4, N]");
    v.extrapolated_total = v.total;
    return v;
  }
  const bool diverged = !(v.total <= opt.divergence_threshold);
  const bool flat = v.slope >= -1.0 + opt.margin;
  const bool logarithmic = v.log_fit_r2 > opt.log_fit_r2 && v.increment_ratio >= opt.increment_ratio;
  if (diverged || flat || logarithmic) {
    v.verdict = H2Membership::NonMember;
    if (diverged) v.reasons.push_back("partial sums exceed the divergence threshold");
    if (flat) v.reasons.push_back("shell sums decay no faster than n^(-1+margin)");
    if (logarithmic) v.reasons.push_back("partial sums grow linearly in log n with non-shrinking increments");
    return v;
  }
  if (v.slope < -1.0 - opt.margin && v.cauchy_tail < opt.tail_tolerance) {
    v.verdict = H2Membership::Member;
    v.reasons.push_back("shell sums decay like n^slope with slope < -1 and the partial sums have settled");
    const double e = -v.slope - 1.0;
    v.extrapolated_total = v.total + sh.s[n] * static_cast<double>(n) / e;
    return v;
  }
  v.reasons.push_back("decay rate too close to n^-1 to decide at this cutoff");
  return v;
}

/// Hermitian section G(alpha, beta) = <v(alpha), v(beta)>_{H^2} over the box [0, upper].
/// G depends on alpha - beta only: G = c(alpha - beta) with c(d) = sum_g a(g) conj(a(g + d)).
inline GramSection gram_section_polydisk(const SparseSymbol& a, const MultiIndex& upper,
                                         std::size_t max_size = kDefaultMaxGramSize) {
  require(upper.arity() == a.arity() && upper.nonnegative(), ErrorKind::InvalidArgument, "bad section box");
  const BoxIndexer box(upper);
  require(box.size() <= max_size, ErrorKind::SizeLimit,
          "Gram section of size " + std::to_string(box.size()) + " exceeds limit " + std::to_string(max_size));
  std::map<MultiIndex, cplx> corr;
  for (const auto& [g, x] : a.terms())
    for (const auto& [h, y] : a.terms()) corr[h - g] += x * std::conj(y);  // d = h - g

  std::vector<MultiIndex> points;
  points.reserve(box.size());
  for_each_in_box(upper, [&](const MultiIndex& al) { points.push_back(al); });
  const auto n = static_cast<Eigen::Index>(points.size());
  GramBlock block;
  block.omega = 1;
  block.positions.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) block.positions[i] = i;
  block.entries = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      auto it = corr.find(points[static_cast<std::size_t>(i)] - points[static_cast<std::size_t>(j)]);
      if (it != corr.end()) block.entries(i, j) = it->second;
    }
  GramSection g;
  g.size = points.size();
  g.blocks.push_back(std::move(block));
  finalize_gram(g);
  return g;
}

struct RieszOptions {
  std::size_t grid_density = 24;     // points per torus coordinate before the total cap
  std::size_t max_grid_points = 1u << 18;
  std::vector<double> radii = {0.5};  // interior polycircles scanned besides the torus
  std::size_t refine_starts = 32;
  int refine_iterations = 200;
  double yes_margin = 1e-6;  // relative to max |a(alpha)|
  double no_margin = 1e-10;
  std::size_t gram_sections = 5;
  std::size_t gram_budget = 1296;  // rows of the largest evidence section
};

struct GramEvidence {
  std::vector<MultiIndex> boxes;
  std::vector<double> lambda_min;
  std::vector<double> lambda_max;
  std::vector<double> condition;
};

struct RieszVerdict {
  Tri riesz = Tri::Unknown;
  double min_modulus = 0.0;
  std::vector<cplx> argmin;
  double scale = 0.0;
  std::size_t evaluations = 0;
  GramEvidence evidence;
  std::vector<std::string> reasons;
};

namespace detail {

inline std::vector<cplx> project_polydisk(std::vector<cplx> w) {
  for (cplx& z : w)
    if (std::abs(z) > 1.0) z /= std::abs(z);
  return w;
}

/// Damped Gauss-Newton on A(w) = 0 with the minimum-norm step, kept inside the closed polydisk.
inline std::pair<double, std::vector<cplx>> refine_min_modulus(const SparseSymbol& a, std::vector<cplx> w, int iters,
                                                               double floor_value) {
  double f = std::abs(a(w));
  const std::size_t m = a.arity();
  for (int it = 0; it < iters && f > floor_value; ++it) {
    const cplx val = a(w);
    std::vector<cplx> grad(m);
    double g2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      grad[j] = a.partial(w, j);
      g2 += std::norm(grad[j]);
    }
    if (g2 == 0.0) break;
    bool improved = false;
    for (double step = 1.0; step >= 1.0 / 1024.0; step *= 0.5) {
      std::vector<cplx> trial(m);
      for (std::size_t j = 0; j < m; ++j) trial[j] = w[j] - step * val * std::conj(grad[j]) / g2;
      trial = project_polydisk(std::move(trial));
      const double ft = std::abs(a(trial));
      if (ft < f) {
        f = ft;
        w = std::move(trial);
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return {f, w};
}

}  // namespace detail

/// Nested Gram sections [0, n_i]^m, n_i = round(L i / k), with (L + 1)^m <= budget.
inline GramEvidence polydisk_gram_evidence(const SparseSymbol& a, std::size_t sections, std::size_t budget) {
  const std::size_t m = a.arity();
  auto side = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(budget), 1.0 / static_cast<double>(m)) + 1e-9));
  while (side > 1 && std::pow(static_cast<double>(side), static_cast<double>(m)) > static_cast<double>(budget)) --side;
  const std::size_t top = side == 0 ? 0 : side - 1;
  GramEvidence ev;
  for (std::size_t i = 1; i <= sections; ++i) {
    const auto n = static_cast<int>(std::llround(static_cast<double>(top) * static_cast<double>(i) / static_cast<double>(sections)));
    const MultiIndex box = MultiIndex::diagonal(m, n);
    const auto g = gram_section_polydisk(a, box, budget);
    ev.boxes.push_back(box);
    ev.lambda_min.push_back(g.extremes.min);
    ev.lambda_max.push_back(g.extremes.max);
    ev.condition.push_back(g.condition());
  }
  return ev;
}

/// Riesz basis verdict from min |A| over the closed polydisk: the system is a
/// Riesz basis exactly when A has no zero there. The search is multistart and
/// heuristic; an inconclusive minimum yields Unknown.
inline RieszVerdict riesz_basis_verdict(const SparseSymbol& a, const RieszOptions& opt = {}) {
  const std::size_t m = a.arity();
  RieszVerdict out;
  out.scale = a.max_abs_coeff();
  require(out.scale > 0.0, ErrorKind::DegenerateInput, "symbol is identically zero");

  std::size_t g = std::max<std::size_t>(2, opt.grid_density);
  while (g > 2 && std::pow(static_cast<double>(g), static_cast<double>(m)) > static_cast<double>(opt.max_grid_points)) --g;
  std::vector<double> radii = {1.0};
  radii.insert(radii.end(), opt.radii.begin(), opt.radii.end());

  struct Sample {
    double value;
    std::vector<cplx> w;
  };
  std::vector<Sample> samples;
  const auto per = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(g), static_cast<double>(m))));
  for (double r : radii) {
    std::vector<Sample> local(per);
    parallel_for(per, [&](std::size_t lo, std::size_t hi) {
      std::vector<cplx> w(m);
      for (std::size_t i = lo; i < hi; ++i) {
        std::size_t k = i;
        for (std::size_t j = 0; j < m; ++j) {
          const double t = 2.0 * kPi * static_cast<double>(k % g) / static_cast<double>(g);
          k /= g;
          w[j] = std::polar(r, t);
        }
        local[i] = {std::abs(a(w)), w};
      }
    }, 1024);
    samples.insert(samples.end(), local.begin(), local.end());
  }
  samples.push_back({std::abs(a.constant_term()), std::vector<cplx>(m, 0.0)});
  out.evaluations = samples.size();

  const std::size_t starts = std::min(opt.refine_starts, samples.size());
  std::partial_sort(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(starts), samples.end(),
                    [](const Sample& x, const Sample& y) { return x.value < y.value; });
  out.min_modulus = samples.front().value;
  out.argmin = samples.front().w;
  const double floor_value = 1e-3 * opt.no_margin * out.scale;
  for (std::size_t s = 0; s < starts; ++s) {
    auto [f, w] = detail::refine_min_modulus(a, samples[s].w, opt.refine_iterations, floor_value);
    if (f < out.min_modulus) {
      out.min_modulus = f;
      out.argmin = std::move(w);
    }
  }

  if (out.min_modulus > opt.yes_margin * out.scale) {
    out.riesz = Tri::Yes;
    out.reasons.push_back("no zero of A in the closed polydisk: min |A| = " + std::to_string(out.min_modulus));
  } else if (out.min_modulus < opt.no_margin * out.scale) {
    out.riesz = Tri::No;
    out.reasons.push_back("A vanishes in the closed polydisk (|A| < " + std::to_string(opt.no_margin) + " max|a|)");
  } else {
    out.riesz = Tri::Unknown;
    out.reasons.push_back("min |A| is between the zero and nonzero margins; search is not certified");
  }
  if (opt.gram_sections > 0) out.evidence = polydisk_gram_evidence(a, opt.gram_sections, opt.gram_budget);
  return out;
}

struct PartialSumReport {
  MultiIndex tau;
  MultiIndex box;
  double norm = 0.0;                // ‖Sigma(tau)‖ on the box
  double enlarged_norm = 0.0;       // same on the box enlarged by 2 per coordinate
  bool exhausted = true;            // relative change <= 2%
  double rank_one_product = 0.0;    // ‖Phi_tau‖ ‖v(tau)‖
  double rank_one_matrix = 0.0;     // ‖P_tau‖ by power iteration
  int iterations = 0;
  bool converged = false;
};

struct PartialSumOptions {
  int slack = 2;
  int enlarge = 2;
  double rel_tol = 1e-6;
  double stability = 0.02;
  std::size_t max_box = 1u << 16;
};

namespace detail {

/// Sigma(tau) = M_A P_{<= tau} M_{1/A} restricted to a box, with the coefficients
/// of f/A on alpha <= tau computed as the truncated convolution b * f.
class PartialSumOperator {
 public:
  PartialSumOperator(const SparseSymbol& a, MultiIndex tau, MultiIndex box, bool rank_one)
      : tau_(std::move(tau)), box_(std::move(box)), rank_one_(rank_one) {
    b_ = reciprocal_box(a, tau_);
    for_each_in_box(tau_, [&](const MultiIndex& s) {
      tau_points_.push_back(s);
      tau_rows_.push_back(box_.index(s));
    });
    for (const auto& [beta, v] : a.terms()) terms_.push_back({beta, v});
  }

  std::size_t dim() const { return box_.size(); }

  /// c(alpha) = sum_{sigma <= alpha} b(sigma) f(alpha - sigma), alpha <= tau (or alpha = tau only).
  std::vector<cplx> coefficients(const Vector& f) const {
    const BoxIndexer tb(tau_);
    std::vector<cplx> c(tau_points_.size(), 0.0);
    for (std::size_t i = 0; i < tau_points_.size(); ++i) {
      const MultiIndex& al = tau_points_[i];
      if (rank_one_ && al != tau_) continue;
      cplx acc = 0.0;
      for_each_in_box(al, [&](const MultiIndex& s) {
        acc += b_[tb.index(s)] * f(static_cast<Eigen::Index>(box_.index(al - s)));
      });
      c[i] = acc;
    }
    return c;
  }

  Vector apply(const Vector& f) const {
    const auto c = coefficients(f);
    Vector y = Vector::Zero(static_cast<Eigen::Index>(dim()));
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == cplx(0.0)) continue;
      for (const auto& [beta, v] : terms_) {
        const MultiIndex k = tau_points_[i] + beta;
        if (box_.contains(k)) y(static_cast<Eigen::Index>(box_.index(k))) += c[i] * v;
      }
    }
    return y;
  }

  Vector apply_adjoint(const Vector& y) const {
    const BoxIndexer tb(tau_);
    std::vector<cplx> d(tau_points_.size(), 0.0);
    for (std::size_t i = 0; i < tau_points_.size(); ++i) {
      if (rank_one_ && tau_points_[i] != tau_) continue;
      cplx acc = 0.0;
      for (const auto& [beta, v] : terms_) {
        const MultiIndex k = tau_points_[i] + beta;
        if (box_.contains(k)) acc += std::conj(v) * y(static_cast<Eigen::Index>(box_.index(k)));
      }
      d[i] = acc;
    }
    Vector f = Vector::Zero(static_cast<Eigen::Index>(dim()));
    for (std::size_t i = 0; i < tau_points_.size(); ++i) {
      if (d[i] == cplx(0.0)) continue;
      const MultiIndex& al = tau_points_[i];
      for_each_in_box(al, [&](const MultiIndex& s) {
        f(static_cast<Eigen::Index>(box_.index(al - s))) += std::conj(b_[tb.index(s)]) * d[i];
      });
    }
    return f;
  }

 private:
  MultiIndex tau_;
  BoxIndexer box_;
  bool rank_one_;
  std::vector<cplx> b_;
  std::vector<MultiIndex> tau_points_;
  std::vector<std::size_t> tau_rows_;
  std::vector<std::pair<MultiIndex, cplx>> terms_;
};

inline PowerIterationResult partial_sum_norm(const SparseSymbol& a, const MultiIndex& tau, const MultiIndex& box,
                                             bool rank_one, double rel_tol, std::size_t max_box) {
  const BoxIndexer bi(box);
  require(bi.size() <= max_box, ErrorKind::SizeLimit,
          "partial-sum box of size " + std::to_string(bi.size()) + " exceeds limit " + std::to_string(max_box));
  const PartialSumOperator op(a, tau, box, rank_one);
  // power iteration on M*M converges in the eigenvalue at twice the rate of the vector
  return largest_singular_value(
      op.dim(), [&](const Vector& x) { return op.apply(x); }, [&](const Vector& x) { return op.apply_adjoint(x); },
      rel_tol);
}

}  // namespace detail

/// ‖Sigma(tau)‖ on the box tau + deg(A) + slack, with the exhaustion check on a
/// box enlarged by `enlarge`, and the rank-one norms ‖P_tau‖ two ways.
inline std::vector<PartialSumReport> partial_sum_norms(const SparseSymbol& a, const std::vector<MultiIndex>& taus,
                                                       const PartialSumOptions& opt, std::vector<Warning>* warnings) {
  require(a.constant_term() != cplx(0.0), ErrorKind::ZeroConstantTerm, "A(0) = 0: Phi_tau is undefined");
  const MultiIndex deg = a.degree_box();
  std::vector<PartialSumReport> out;
  for (const MultiIndex& tau : taus) {
    require(tau.arity() == a.arity() && tau.nonnegative(), ErrorKind::InvalidArgument, "bad tau " + tau.str());
    PartialSumReport r;
    r.tau = tau;
    r.box = tau + deg + MultiIndex::diagonal(a.arity(), opt.slack);
    const auto main = detail::partial_sum_norm(a, tau, r.box, false, opt.rel_tol, opt.max_box);
    r.norm = main.value;
    r.iterations = main.iterations;
    r.converged = main.converged;
    const MultiIndex big = r.box + MultiIndex::diagonal(a.arity(), opt.enlarge);
    r.enlarged_norm = detail::partial_sum_norm(a, tau, big, false, opt.rel_tol, opt.max_box).value;
    r.exhausted = std::abs(r.enlarged_norm - r.norm) <= opt.stability * r.norm;
    if (!r.exhausted && warnings)
      warnings->push_back({"NonExhausted", "norm of Sigma" + tau.str() + " moved by more than " +
                                               std::to_string(100 * opt.stability) + "% under box enlargement"});
    if (!r.converged && warnings)
      warnings->push_back({"NonConvergence", "power iteration for Sigma" + tau.str() + " stopped at residual " +
                                                 std::to_string(main.residual)});
    r.rank_one_product = dual_functional(a, tau).norm() * a.l2_norm();
    r.rank_one_matrix = detail::partial_sum_norm(a, tau, r.box, true, opt.rel_tol, opt.max_box).value;
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<PartialSumReport> partial_sum_norms(const SparseSymbol& a, const std::vector<MultiIndex>& taus) {
  return partial_sum_norms(a, taus, PartialSumOptions{}, nullptr);
}

}  // namespace dilated

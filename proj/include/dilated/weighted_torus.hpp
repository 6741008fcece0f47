#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "dilated/error.hpp"
#include "dilated/linalg.hpp"
#include "dilated/multi_index.hpp"
#include "dilated/numeric.hpp"
#include "dilated/polydisk.hpp"
#include "dilated/quadrature.hpp"
#include "dilated/symbol.hpp"

namespace dilated {

enum class WeightKind { Symbol, Model };

constexpr const char* to_string(WeightKind k) noexcept { return k == WeightKind::Symbol ? "symbol" : "model"; }

/// Reduces an angle to the fundamental domain [-pi, pi).
inline double wrap_angle(double t) {
  const double r = std::remainder(t, 2.0 * kPi);
  return r >= kPi ? r - 2.0 * kPi : r;
}

/// Weight on the torus T^m: P(t) = |A(e^{it})|^2 with exact Fourier
/// coefficients, or the model P(t) = (sum t_j)^2 + (sum t_j^2)^2 on [-pi, pi)^m.
struct TorusWeight {
  WeightKind kind = WeightKind::Symbol;
  std::size_t arity = 1;
  double scale = 1.0;
  std::map<MultiIndex, cplx> fourier;  // unscaled P^(gamma), symbol kind only
  std::optional<SparseSymbol> symbol;
  std::optional<std::vector<double>> estar;  // set when A is the E* symbol
  std::vector<std::vector<double>> zeros;    // known points of the zero set on the torus

  /// P(t) by the finite Fourier sum (symbol kind) or the closed form (model kind).
  double operator()(std::span<const double> t) const {
    require(t.size() == arity, ErrorKind::InvalidArgument, "weight evaluation arity mismatch");
    if (kind == WeightKind::Model) return scale * model_value(t);
    double acc = 0.0;
    for (const auto& [g, c] : fourier) {
      double phase = 0.0;
      for (std::size_t j = 0; j < arity; ++j) phase += g[j] * t[j];
      acc += std::real(c * std::polar(1.0, phase));
    }
    return scale * acc;
  }

  /// |A(e^{it})|^2 evaluated from A itself. More accurate than the Fourier sum near zeros of P.
  double direct(std::span<const double> t) const {
    if (kind == WeightKind::Model) return scale * model_value(t);
    std::vector<cplx> w(arity);
    for (std::size_t j = 0; j < arity; ++j) w[j] = std::polar(1.0, t[j]);
    return scale * std::norm((*symbol)(w));
  }

  cplx fourier_coefficient(const MultiIndex& g) const {
    require(kind == WeightKind::Symbol, ErrorKind::WrongWeightKind, "exact Fourier data exists for symbol weights only");
    auto it = fourier.find(g);
    return it == fourier.end() ? cplx(0.0) : scale * it->second;
  }

  bool constant() const {
    return kind == WeightKind::Symbol && fourier.size() == 1 && fourier.begin()->first.is_zero();
  }

  TorusWeight scaled(double c) const {
    require(c > 0.0, ErrorKind::InvalidArgument, "weight scale must be positive");
    TorusWeight w = *this;
    w.scale *= c;
    return w;
  }

  static double model_value(std::span<const double> t) {
    double s1 = 0.0, s2 = 0.0;
    for (double x : t) {
      const double y = wrap_angle(x);
      s1 += y;
      s2 += y * y;
    }
    return s1 * s1 + s2 * s2;
  }
};

/// P^(gamma) = sum_alpha a(alpha + gamma) conj(a(alpha)). Zeros of P on the torus
/// found by the min-|A| search are recorded.
inline TorusWeight weight_from_symbol(const SparseSymbol& a, bool locate_zeros = true) {
  TorusWeight w;
  w.kind = WeightKind::Symbol;
  w.arity = a.arity();
  for (const auto& [al, x] : a.terms())
    for (const auto& [be, y] : a.terms()) w.fourier[be - al] += y * std::conj(x);  // gamma = beta - alpha
  for (auto it = w.fourier.begin(); it != w.fourier.end();)
    it = it->second == cplx(0.0) ? w.fourier.erase(it) : std::next(it);
  w.symbol = a;
  if (locate_zeros) {
    RieszOptions opt;
    opt.radii.clear();
    opt.gram_sections = 0;
    const auto r = riesz_basis_verdict(a, opt);
    bool on_torus = true;
    for (const cplx& z : r.argmin) on_torus = on_torus && std::abs(std::abs(z) - 1.0) < 1e-9;
    if (r.riesz == Tri::No && on_torus) {
      std::vector<double> t;
      for (const cplx& z : r.argmin) t.push_back(std::arg(z));
      w.zeros.push_back(std::move(t));
    }
  }
  return w;
}

inline TorusWeight weight_from_estar(const EStarSymbol& e) {
  TorusWeight w = weight_from_symbol(e.symbol(), false);
  w.estar = e.weights;
  w.zeros = {std::vector<double>(e.weights.size(), 0.0)};
  return w;
}

inline TorusWeight model_weight(std::size_t m) {
  require(m >= 1, ErrorKind::InvalidArgument, "model weight needs m >= 1");
  TorusWeight w;
  w.kind = WeightKind::Model;
  w.arity = m;
  w.zeros = {std::vector<double>(m, 0.0)};
  return w;
}

struct WeightProfile {
  double r_max = 0.0;
  std::size_t samples = 0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  std::vector<double> radii;
  std::vector<double> ratios;  // P(t) / (r^4 + l(t)^2) per sample

  double spread() const { return ratio_max / ratio_min; }
};

/// Ratio P(t) / (|t|^4 + l(t)^2), l(t) = sum c_k t_k, over quasi-random t with
/// |t| <= r_max; radii are log-uniform over three decades. t = 0 is excluded.
inline WeightProfile weight_profile_check(const TorusWeight& w, double r_max = 0.1, std::size_t samples = 4096) {
  require(w.estar.has_value(), ErrorKind::WrongWeightKind, "weight profile needs a weight derived from an E* symbol");
  require(r_max > 0.0 && samples >= 1, ErrorKind::InvalidArgument, "bad profile parameters");
  const std::size_t m = w.arity;
  const auto& c = *w.estar;
  const KroneckerSequence seq(m + 1);
  WeightProfile out;
  out.r_max = r_max;
  out.ratio_min = std::numeric_limits<double>::infinity();
  out.ratio_max = 0.0;
  std::vector<double> t(m);
  for (std::size_t i = 0; out.samples < samples && i < 64 * samples; ++i) {
    // direction from the inverse normal CDF of quasi-random coordinates
    double norm = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double u = std::clamp(seq(i, j), 1e-12, 1.0 - 1e-12);
      t[j] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
      norm += t[j] * t[j];
    }
    norm = std::sqrt(norm);
    if (norm < 1e-12) continue;
    const double r = r_max * std::pow(10.0, -3.0 * seq(i, m));
    double l = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      t[j] *= r / norm;
      l += c[j] * t[j];
    }
    const double model = r * r * r * r + l * l;
    const double ratio = w.direct(t) / w.scale / model;
    out.radii.push_back(r);
    out.ratios.push_back(ratio);
    out.ratio_min = std::min(out.ratio_min, ratio);
    out.ratio_max = std::max(out.ratio_max, ratio);
    ++out.samples;
  }
  return out;
}

enum class QuadStatus { Converged, Diverging, Unconverged, Singular };

constexpr const char* to_string(QuadStatus s) noexcept {
  switch (s) {
    case QuadStatus::Converged: return "converged";
    case QuadStatus::Diverging: return "QuadratureDiverging";
    case QuadStatus::Unconverged: return "unconverged";
    case QuadStatus::Singular: return "singular";
  }
  return "?";
}

struct A2Options {
  int s_min = 1;
  int s_max = 8;
  std::size_t random_centers = 4;
  std::uint64_t seed = 20160621;
  std::vector<std::vector<double>> centers;  // extra centers
  bool zero_centers = true;
  int max_generations = 4;
  double rel_change = 0.01;
  std::size_t max_cells = 1'000'000;
  int base_depth = 12;
  int depth_step = 4;
};

struct A2Rectangle {
  std::vector<double> center;
  double h = 0.0;
  double avg_p = 0.0;
  double avg_inv_p = 0.0;
  double product = 0.0;
  QuadStatus status = QuadStatus::Unconverged;
  int generations = 0;
  std::size_t cells = 0;
  std::vector<double> history;  // avg(1/P) per refinement generation
};

struct A2Scale {
  int s = 0;
  double h = 0.0;
  double sup = 0.0;
  QuadStatus status = QuadStatus::Converged;
  std::size_t diverging = 0;
};

struct A2Report {
  std::vector<A2Scale> scales;
  std::vector<A2Rectangle> rectangles;
  std::vector<Warning> warnings;
};

namespace detail {

/// Exact average of a symbol weight over the cube c + [-h, h]^m:
/// sum_gamma P^(gamma) e^{i gamma c} prod_j sinc(gamma_j h).
inline double exact_average(const TorusWeight& w, std::span<const double> c, double h) {
  double acc = 0.0;
  for (const auto& [g, v] : w.fourier) {
    double phase = 0.0, damp = 1.0;
    for (std::size_t j = 0; j < w.arity; ++j) {
      phase += g[j] * c[j];
      const double x = g[j] * h;
      damp *= x == 0.0 ? 1.0 : std::sin(x) / x;
    }
    acc += damp * std::real(v * std::polar(1.0, phase));
  }
  return w.scale * acc;
}

inline A2Rectangle a2_rectangle(const TorusWeight& w, std::vector<double> center, double h, const A2Options& opt) {
  const std::size_t m = w.arity;
  A2Rectangle r;
  r.center = std::move(center);
  r.h = h;
  std::vector<double> lo(m), hi(m);
  for (std::size_t j = 0; j < m; ++j) {
    lo[j] = r.center[j] - h;
    hi[j] = r.center[j] + h;
  }
  if (w.kind == WeightKind::Symbol) {
    r.avg_p = exact_average(w, r.center, h);
  } else {
    // the model weight is a quartic polynomial inside the fundamental domain
    double measure = 1.0;
    for (std::size_t j = 0; j < m; ++j) measure *= 2.0 * h;
    r.avg_p = tensor_gauss<7>([&](std::span<const double> t) { return w.direct(t); }, lo, hi) / measure;
  }
  const auto inv = [&](std::span<const double> t) { return 1.0 / w.direct(t); };
  double best = 0.0;
  int doublings = 0;
  double prev = 0.0;
  r.status = QuadStatus::Unconverged;
  for (int g = 0; g < opt.max_generations; ++g) {
    BoxRuleOptions ro;
    ro.inner_depth = opt.base_depth + opt.depth_step * g;
    ro.max_cells = std::min<std::size_t>(opt.max_cells, std::size_t{8} << (2 * g));
    const auto res = integrate_box(inv, lo, hi, r.center, ro);
    r.generations = g + 1;
    r.cells = res.cells;
    if (!res.finite) {
      r.status = QuadStatus::Singular;
      best = std::numeric_limits<double>::infinity();
      r.history.push_back(best);
      break;
    }
    const double est = res.average();
    r.history.push_back(est);
    best = std::max(best, est);  // refinement can only reveal more mass near a zero
    if (g > 0) {
      doublings = est >= 2.0 * prev ? doublings + 1 : 0;
      if (doublings >= 2) {
        r.status = QuadStatus::Diverging;
        break;
      }
      if (std::abs(est - prev) <= opt.rel_change * std::abs(est)) {
        r.status = QuadStatus::Converged;
        break;
      }
    }
    prev = est;
  }
  r.avg_inv_p = best;
  r.product = r.avg_p * r.avg_inv_p;
  return r;
}

}  // namespace detail

/// Scan of the A2 functional avg_R(P) avg_R(1/P) over cubes of half-side
/// h_s = 2^{-s} centred on the zero set of P and on quasi-random points.
/// The scan is a lower bound for the A2 constant.
inline A2Report a2_estimate(const TorusWeight& w, const A2Options& opt = {}) {
  require(opt.s_min >= 0 && opt.s_max >= opt.s_min, ErrorKind::InvalidArgument, "bad scale ladder");
  const std::size_t m = w.arity;
  std::vector<std::vector<double>> centers;
  if (opt.zero_centers)
    for (const auto& z : w.zeros) centers.push_back(z);
  for (const auto& c : opt.centers) {
    require(c.size() == m, ErrorKind::InvalidArgument, "center arity mismatch");
    centers.push_back(c);
  }
  const KroneckerSequence seq(m, std::fmod(0.5 + 0.6180339887498949 * static_cast<double>(opt.seed % 1000003), 1.0));
  for (std::size_t i = 0; i < opt.random_centers; ++i) {
    std::vector<double> c(m);
    for (std::size_t j = 0; j < m; ++j) c[j] = -kPi / 2 + kPi * seq(i, j);
    centers.push_back(std::move(c));
  }
  A2Report out;
  struct Job {
    int s;
    std::size_t c;
  };
  std::vector<Job> jobs;
  for (int s = opt.s_min; s <= opt.s_max; ++s)
    for (std::size_t c = 0; c < centers.size(); ++c) jobs.push_back({s, c});
  out.rectangles.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      out.rectangles[i] = detail::a2_rectangle(w, centers[jobs[i].c], std::ldexp(1.0, -jobs[i].s), opt);
  }, 1);
  for (int s = opt.s_min; s <= opt.s_max; ++s) {
    A2Scale sc;
    sc.s = s;
    sc.h = std::ldexp(1.0, -s);
    bool unconverged = false;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].s != s) continue;
      const auto& r = out.rectangles[i];
      sc.sup = std::max(sc.sup, r.product);
      if (r.status == QuadStatus::Diverging || r.status == QuadStatus::Singular) ++sc.diverging;
      if (r.status == QuadStatus::Unconverged) unconverged = true;
    }
    sc.status = sc.diverging > 0 ? QuadStatus::Diverging : unconverged ? QuadStatus::Unconverged : QuadStatus::Converged;
    if (sc.diverging > 0)
      out.warnings.push_back({"QuadratureDiverging", "avg(1/P) grows without settling at scale 2^-" + std::to_string(s)});
    out.scales.push_back(sc);
  }
  return out;
}

enum class IntegralMethod { Ball, Polar };

struct IntegralOptions {
  IntegralMethod method = IntegralMethod::Ball;
  int decades = 6;                  // inner cutoffs delta 10^{-k}, k = 1..decades
  int subshells = 8;                // geometric sub-shells per decade
  std::size_t samples_per_stratum = 4096;
  std::uint64_t seed = 20160621;
  double stability = 0.2;
};

struct IntegralReport {
  std::size_t m = 0;
  double delta = 0.0;
  std::optional<double> reduced;  // (pi/4) delta^{m-3} / (m-3), m >= 4
  std::vector<double> cutoffs;
  std::vector<double> estimates;  // I(eps_k)
  double direct_estimate = 0.0;
  bool converged = false;
  bool divergent = false;
  std::string verdict;
};

/// Finiteness of int_{|zeta| <= delta} dzeta / (zeta_0^2 + zeta_1^4 + ... + zeta_{m-1}^4).
/// Ball: zeta_0 is integrated in closed form and zeta' in B^{m-1}(delta) by
/// stratified Monte Carlo on radial shells. Polar: the reduced double integral
/// int_0^delta int_0^{rho^2} rho^{m-2} / (zeta^2 + rho^4) dzeta drho, by stratified
/// Monte Carlo in rho and zeta. The inner cutoff |zeta'| >= eps shrinks by decades.
inline IntegralReport integral_test(std::size_t m, double delta, const IntegralOptions& opt = {}) {
  require(m >= 2, ErrorKind::InvalidArgument, "integral test needs m >= 2");
  require(delta > 0.0 && delta <= 1.0, ErrorKind::InvalidArgument, "delta must lie in (0, 1]");
  require(opt.decades >= 3 && opt.subshells >= 1 && opt.samples_per_stratum >= 1, ErrorKind::InvalidArgument,
          "bad Monte Carlo layout");
  IntegralReport out;
  out.m = m;
  out.delta = delta;
  if (m >= 4) out.reduced = kPi / 4.0 * std::pow(delta, static_cast<double>(m) - 3.0) / (static_cast<double>(m) - 3.0);

  const std::size_t d = m - 1;  // dimension of zeta'
  const double ball_const = std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);  // volume of the unit (m-1)-ball
  const auto strata = static_cast<std::size_t>(opt.decades * opt.subshells);
  std::vector<double> contrib(strata, 0.0);

  parallel_for(strata, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      const double a = delta * std::pow(10.0, -static_cast<double>(k + 1) / opt.subshells);
      const double b = delta * std::pow(10.0, -static_cast<double>(k) / opt.subshells);
      std::seed_seq ss{opt.seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(m)};
      std::mt19937_64 rng(ss);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> terms(opt.samples_per_stratum);
      if (opt.method == IntegralMethod::Ball) {
        const double pa = std::pow(a, static_cast<double>(d)), pb = std::pow(b, static_cast<double>(d));
        const double volume = ball_const * (pb - pa);
        std::vector<double> z(d);
        for (double& term : terms) {
          const double r = std::pow(pa + (pb - pa) * unif(rng), 1.0 / static_cast<double>(d));
          double nz = 0.0;
          for (double& x : z) {
            x = normal(rng);
            nz += x * x;
          }
          nz = std::sqrt(nz);
          double q = 0.0;
          for (double& x : z) {
            x *= r / nz;
            q += x * x * x * x;
          }
          const double zmax = std::sqrt(std::max(0.0, delta * delta - r * r));
          const double sq = std::sqrt(q);
          term = volume * 2.0 * std::atan(zmax / sq) / sq;
        }
      } else {
        // rho uniform on [a, b]; zeta = rho^2 eta with eta uniform on [0, 1]
        for (double& term : terms) {
          const double rho = a + (b - a) * unif(rng);
          const double eta = unif(rng);
          const double zeta = rho * rho * eta;
          term = (b - a) * rho * rho * std::pow(rho, static_cast<double>(m) - 2.0) / (zeta * zeta + std::pow(rho, 4.0));
        }
      }
      contrib[k] = pairwise_sum(terms) / static_cast<double>(terms.size());
    }
  }, 1);

  double running = 0.0;
  for (int dec = 0; dec < opt.decades; ++dec) {
    for (int s = 0; s < opt.subshells; ++s) running += contrib[static_cast<std::size_t>(dec * opt.subshells + s)];
    out.cutoffs.push_back(delta * std::pow(10.0, -(dec + 1)));
    out.estimates.push_back(running);
  }
  const std::size_t last = out.estimates.size() - 1;
  out.direct_estimate = out.estimates[last];
  out.converged = std::abs(out.estimates[last] - out.estimates[last - 2]) <= opt.stability * out.estimates[last];
  out.divergent = !out.converged && out.estimates[last] >= 2.0 * out.estimates[0];
  out.verdict = out.converged ? "finite" : out.divergent ? "divergent" : "inconclusive";
  return out;
}

/// Half-space form M(alpha) = sum mu_j alpha_j.
struct LinearForm {
  std::vector<double> mu;
  bool rational = false;
  std::vector<std::uint64_t> primes;

  static LinearForm from_primes(std::vector<std::uint64_t> primes) {
    require(!primes.empty(), ErrorKind::InvalidArgument, "need at least one prime");
    require_distinct_primes(primes);
    LinearForm f;
    for (auto p : primes) f.mu.push_back(std::log(static_cast<double>(p)));
    f.primes = std::move(primes);
    return f;
  }

  /// Rational coefficients; M_0(y) = y_1 is rational({1, 0, ..., 0}).
  static LinearForm rational_form(std::vector<double> mu) {
    require(!mu.empty(), ErrorKind::InvalidArgument, "need at least one coefficient");
    LinearForm f;
    f.mu = std::move(mu);
    f.rational = true;
    return f;
  }

  std::size_t arity() const { return mu.size(); }

  double operator()(const MultiIndex& a) const {
    double s = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) s += mu[j] * a[j];
    return s;
  }

  bool keeps(const MultiIndex& a) const {
    double scale = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) scale += std::abs(mu[j] * a[j]);
    return (*this)(a) >= -1e-12 * std::max(1.0, scale);
  }
};

struct OperatorNormReport {
  std::string label;
  int n = 0;
  MultiIndex tau;
  std::size_t dim = 0;
  std::size_t kept = 0;
  double norm = 0.0;
  double quadrature_error = 0.0;
  std::string method;
};

namespace detail {

/// (1 / 2 pi) int_{-pi}^{pi} t^k e^{-i g t} dt for k = 0..4, g in [-G, G], by
/// 64-point Gauss-Legendre; the 48-point rule gives the error estimate.
struct MomentTable {
  int g_max = 0;
  std::vector<std::array<cplx, 5>> values;
  double error = 0.0;

  explicit MomentTable(int gmax) : g_max(gmax), values(static_cast<std::size_t>(2 * gmax + 1)) {
    using G64 = boost::math::quadrature::gauss<double, 64>;
    using G48 = boost::math::quadrature::gauss<double, 48>;
    for (int g = -gmax; g <= gmax; ++g)
      for (int k = 0; k <= 4; ++k) {
        auto re = [&](double t) { return std::pow(t, k) * std::cos(g * t); };
        auto im = [&](double t) { return -std::pow(t, k) * std::sin(g * t); };
        const cplx hi(G64::integrate(re, -kPi, kPi), G64::integrate(im, -kPi, kPi));
        const cplx lo(G48::integrate(re, -kPi, kPi), G48::integrate(im, -kPi, kPi));
        values[static_cast<std::size_t>(g + gmax)][static_cast<std::size_t>(k)] = hi / (2.0 * kPi);
        error = std::max(error, std::abs(hi - lo) / (2.0 * kPi));
      }
  }

  cplx operator()(int k, int g) const {
    if (k == 0) return g == 0 ? cplx(1.0) : cplx(0.0);
    return values[static_cast<std::size_t>(g + g_max)][static_cast<std::size_t>(k)];
  }
};

/// Fourier coefficient of the model weight from products of 1D moments:
/// (sum t)^2 + (sum t^2)^2 = sum t_j^2 + 2 sum_{i<j} t_i t_j + sum t_j^4 + 2 sum_{i<j} t_i^2 t_j^2.
inline cplx model_fourier(const MomentTable& mt, const MultiIndex& g) {
  const std::size_t m = g.arity();
  auto product = [&](const std::vector<int>& powers) {
    cplx p = 1.0;
    for (std::size_t j = 0; j < m; ++j) p *= mt(powers[j], g[j]);
    return p;
  };
  cplx acc = 0.0;
  std::vector<int> pw(m, 0);
  for (std::size_t j = 0; j < m; ++j) {
    pw[j] = 2;
    acc += product(pw);
    pw[j] = 4;
    acc += product(pw);
    pw[j] = 0;
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      pw[i] = pw[j] = 1;
      acc += 2.0 * product(pw);
      pw[i] = pw[j] = 2;
      acc += 2.0 * product(pw);
      pw[i] = pw[j] = 0;
    }
  return acc;
}

/// Weighted Gram matrix G(alpha, beta) = <e_alpha, e_beta>_P = P^(beta - alpha) on a list of exponents.
inline Matrix weighted_gram(const TorusWeight& w, const std::vector<MultiIndex>& pts, double& quad_error) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Matrix g(n, n);
  quad_error = 0.0;
  std::optional<MomentTable> mt;
  if (w.kind == WeightKind::Model) {
    int span = 0;
    for (const auto& a : pts)
      for (std::size_t j = 0; j < a.arity(); ++j) span = std::max(span, std::abs(a[j]));
    mt.emplace(2 * span);
    quad_error = mt->error * w.scale;
  }
  std::map<MultiIndex, cplx> cache;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const MultiIndex d = pts[static_cast<std::size_t>(j)] - pts[static_cast<std::size_t>(i)];
      auto it = cache.find(d);
      if (it == cache.end()) {
        const cplx v = w.kind == WeightKind::Symbol ? w.fourier_coefficient(d) : w.scale * model_fourier(*mt, d);
        it = cache.emplace(d, v).first;
      }
      g(i, j) = it->second;
    }
  return g;
}

inline double projection_norm(const Matrix& g, const std::vector<bool>& keep, std::string& method) {
  const auto n = g.rows();
  Matrix qgq = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (keep[static_cast<std::size_t>(i)] && keep[static_cast<std::size_t>(j)]) qgq(i, j) = g(i, j);
  constexpr Eigen::Index kDenseLimit = 2401;  // 7^4
  if (n <= kDenseLimit) {
    method = "dense";
    return std::sqrt(std::max(0.0, largest_generalized_eigenvalue(qgq, g)));
  }
  method = "power";
  Eigen::LLT<Matrix> llt(g);
  require(llt.info() == Eigen::Success, ErrorKind::GramNotPositive, "Gram matrix is not positive definite");
  // power iteration for G^{-1} QGQ in the G inner product
  Vector x = Vector::Ones(n).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 5000; ++it) {
    Vector y = llt.solve(qgq * x);
    const double next = std::real(x.dot(qgq * x)) / std::real(x.dot(g * x));
    x = y / std::sqrt(std::real(y.dot(g * y)));
    if (it > 0 && std::abs(next - lambda) <= 1e-12 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(0.0, lambda));
}

}  // namespace detail

inline constexpr std::size_t kMaxWeightedDim = 10'000;

/// ‖Q_M‖ on L^2(T^m; P) restricted to trigonometric polynomials with |alpha_j| <= n:
/// the square root of the largest eigenvalue of the pencil (QGQ, G).
inline OperatorNormReport qm_projection_norm(const TorusWeight& w, const LinearForm& form, int n) {
  require(form.arity() == w.arity, ErrorKind::InvalidArgument, "form and weight arity differ");
  require(n >= 0, ErrorKind::InvalidArgument, "n must be nonnegative");
  const MultiIndex lo = MultiIndex::diagonal(w.arity, -n);
  std::vector<MultiIndex> pts;
  double dim = std::pow(2.0 * n + 1.0, static_cast<double>(w.arity));
  require(dim <= static_cast<double>(kMaxWeightedDim), ErrorKind::SizeLimit,
          "exponent box of size " + std::to_string(static_cast<std::size_t>(dim)) + " exceeds limit");
  for_each_in_box(MultiIndex::diagonal(w.arity, 2 * n), [&](const MultiIndex& a) { pts.push_back(a + lo); });
  OperatorNormReport r;
  r.label = "qm";
  r.n = n;
  r.dim = pts.size();
  std::vector<bool> keep(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    keep[i] = form.keeps(pts[i]);
    r.kept += keep[i];
  }
  const Matrix g = detail::weighted_gram(w, pts, r.quadrature_error);
  r.norm = detail::projection_norm(g, keep, r.method);
  return r;
}

/// Norms of the coordinate projections onto {alpha <= tau} in L^2(T^m; P),
/// on the exponent box 0 <= alpha <= n.
inline std::vector<OperatorNormReport> weighted_partial_sum_norms(const TorusWeight& w,
                                                                  const std::vector<MultiIndex>& taus, int n) {
  require(n >= 0, ErrorKind::InvalidArgument, "n must be nonnegative");
  const double dim = std::pow(n + 1.0, static_cast<double>(w.arity));
  require(dim <= static_cast<double>(kMaxWeightedDim), ErrorKind::SizeLimit,
          "exponent box of size " + std::to_string(static_cast<std::size_t>(dim)) + " exceeds limit");
  std::vector<MultiIndex> pts;
  for_each_in_box(MultiIndex::diagonal(w.arity, n), [&](const MultiIndex& a) { pts.push_back(a); });
  double qerr = 0.0;
  const Matrix g = detail::weighted_gram(w, pts, qerr);
  std::vector<OperatorNormReport> out;
  for (const auto& tau : taus) {
    require(tau.arity() == w.arity && tau.nonnegative(), ErrorKind::InvalidArgument, "bad tau " + tau.str());
    OperatorNormReport r;
    r.label = "weighted-sections";
    r.n = n;
    r.tau = tau;
    r.dim = pts.size();
    r.quadrature_error = qerr;
    std::vector<bool> keep(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      keep[i] = pts[i].leq(tau);
      r.kept += keep[i];
    }
    r.norm = detail::projection_norm(g, keep, r.method);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace dilated

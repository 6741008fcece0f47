#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dilated/error.hpp"
#include "dilated/numeric.hpp"

namespace dilated {

/// Integral of f over the box prod [lo_j, hi_j], with the box measure computed
/// by the same rule so that avg = value / measure is exact for constants.
struct BoxIntegral {
  double value = 0.0;
  double measure = 0.0;
  bool finite = true;
  std::size_t cells = 0;
  double outer_error = 0.0;

  double average() const { return value / measure; }
};

struct BoxRuleOptions {
  int inner_depth = 12;         // bisection depth cap of the 1D Gauss-Kronrod rule
  double inner_tolerance = 1e-9;
  std::size_t max_line_pieces = 256;   // interval budget of the 1D rule
  std::size_t max_cells = 8;    // outer cell budget
  double outer_floor = 1e-14;   // cells with smaller error are not split
};

namespace detail {

/// 1D adaptive G7/K15 on [a, b] with a global error queue: the interval with
/// the largest |K15 - G7| is bisected until the total error is below tolerance,
/// the interval budget is spent, or every candidate sits at the depth cap.
/// The range is pre-split at `split` so a singularity there is never sampled.
/// Returns false when the integrand is not finite.
template <typename F>
bool integrate_line(F&& f, double a, double split, double b, const BoxRuleOptions& opt, double& value, double& unit) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Piece {
    double lo, hi, value, err, unit;
    int depth;
    bool operator<(const Piece& o) const { return err < o.err; }
  };
  bool finite = true;
  auto rule = [&](double lo, double hi, int depth) {
    double err = 0.0;
    const double v = GK::integrate(f, lo, hi, 0, 0.0, &err);
    if (!std::isfinite(v) || !std::isfinite(err)) finite = false;
    return Piece{lo, hi, v, err, GK::integrate([](double) { return 1.0; }, lo, hi, 0, 0.0), depth};
  };
  std::priority_queue<Piece> open;
  std::vector<Piece> done;
  const double cuts[3] = {a, std::clamp(split, a, b), b};
  for (int k = 0; k < 2; ++k)
    if (cuts[k + 1] > cuts[k]) open.push(rule(cuts[k], cuts[k + 1], 0));
  double total = 0.0, err = 0.0;
  for (auto copy = open; !copy.empty(); copy.pop()) {
    total += copy.top().value;
    err += copy.top().err;
  }
  std::size_t pieces = open.size();
  while (finite && !open.empty() && pieces < opt.max_line_pieces) {
    if (err <= opt.inner_tolerance * std::abs(total)) break;
    Piece p = open.top();
    open.pop();
    if (p.depth >= opt.inner_depth) {
      done.push_back(p);
      continue;
    }
    const double mid = 0.5 * (p.lo + p.hi);
    const Piece l = rule(p.lo, mid, p.depth + 1), r = rule(mid, p.hi, p.depth + 1);
    total += l.value + r.value - p.value;
    err += l.err + r.err - p.err;
    open.push(l);
    open.push(r);
    ++pieces;
  }
  if (!finite) return false;
  while (!open.empty()) {
    done.push_back(open.top());
    open.pop();
  }
  std::sort(done.begin(), done.end(), [](const Piece& x, const Piece& y) { return x.lo < y.lo; });
  std::vector<double> values, units;
  for (const auto& p : done) {
    values.push_back(p.value);
    units.push_back(p.unit);
  }
  value = pairwise_sum(values);
  unit = pairwise_sum(units);
  return true;
}

}  // namespace detail

/// Nested adaptive rule: coordinate 0 by 1D adaptive Gauss-Kronrod, the
/// remaining coordinates by adaptive dyadic cells carrying a tensor 2-point
/// Gauss-Legendre rule, refined where it disagrees most with the cell-centre
/// rule. The initial partition is split at `split`.
template <typename F>
BoxIntegral integrate_box(F&& f, std::span<const double> lo, std::span<const double> hi, std::span<const double> split,
                          const BoxRuleOptions& opt) {
  const std::size_t m = lo.size();
  require(m >= 1 && hi.size() == m && split.size() == m, ErrorKind::InvalidArgument, "box dimension mismatch");
  BoxIntegral out;
  std::vector<double> t(m);
  auto line = [&](std::span<const double> rest, double& value, double& unit) {
    for (std::size_t j = 1; j < m; ++j) t[j] = rest[j - 1];
    return detail::integrate_line(
        [&](double x) {
          t[0] = x;
          return f(std::span<const double>(t));
        },
        lo[0], split[0], hi[0], opt, value, unit);
  };
  if (m == 1) {
    out.cells = 1;
    out.finite = line({}, out.value, out.measure);
    return out;
  }

  const std::size_t d = m - 1;
  const double g = 1.0 / std::sqrt(3.0);
  struct Cell {
    std::vector<double> a, b;
    double value = 0.0, unit = 0.0, err = 0.0;
    bool finite = true;
  };
  auto evaluate = [&](Cell& c) {
    std::vector<double> node(d);
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) w *= 0.5 * (c.b[j] - c.a[j]);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      for (std::size_t j = 0; j < d; ++j) {
        const double mid = 0.5 * (c.a[j] + c.b[j]), half = 0.5 * (c.b[j] - c.a[j]);
        node[j] = mid + ((mask >> j) & 1u ? g : -g) * half;
      }
      double v = 0.0, u = 0.0;
      if (!line(node, v, u)) c.finite = false;
      c.value += w * v;
      c.unit += w * u;
    }
    for (std::size_t j = 0; j < d; ++j) node[j] = 0.5 * (c.a[j] + c.b[j]);
    double v = 0.0, u = 0.0;
    if (!line(node, v, u)) c.finite = false;
    const double centre = w * static_cast<double>(std::size_t{1} << d) * v;
    c.err = std::abs(c.value - centre);
  };
  auto children = [&](const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& cut) {
    std::vector<Cell> kids;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      Cell c;
      c.a.resize(d);
      c.b.resize(d);
      bool empty = false;
      for (std::size_t j = 0; j < d; ++j) {
        const bool upper = (mask >> j) & 1u;
        c.a[j] = upper ? cut[j] : a[j];
        c.b[j] = upper ? b[j] : cut[j];
        empty = empty || c.b[j] <= c.a[j];
      }
      if (empty) continue;
      evaluate(c);
      kids.push_back(std::move(c));
    }
    return kids;
  };

  auto cmp = [](const Cell& x, const Cell& y) { return x.err < y.err; };
  std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> queue(cmp);
  std::vector<double> a(lo.begin() + 1, lo.end()), b(hi.begin() + 1, hi.end()), cut(split.begin() + 1, split.end());
  for (std::size_t j = 0; j < d; ++j) cut[j] = std::clamp(cut[j], a[j], b[j]);
  for (auto& c : children(a, b, cut)) queue.push(std::move(c));
  const std::size_t fan = std::size_t{1} << d;
  while (queue.size() + fan - 1 <= opt.max_cells) {
    const Cell& top = queue.top();
    if (top.err <= opt.outer_floor * std::max(1.0, std::abs(top.value))) break;
    Cell c = top;
    queue.pop();
    std::vector<double> mid(d);
    for (std::size_t j = 0; j < d; ++j) mid[j] = 0.5 * (c.a[j] + c.b[j]);
    for (auto& k : children(c.a, c.b, mid)) queue.push(std::move(k));
  }
  std::vector<double> values, units;
  while (!queue.empty()) {
    const Cell& c = queue.top();
    values.push_back(c.value);
    units.push_back(c.unit);
    out.outer_error += c.err;
    out.finite = out.finite && c.finite;
    queue.pop();
  }
  out.cells = values.size();
  out.value = pairwise_sum(values);
  out.measure = pairwise_sum(units);
  return out;
}

/// Tensor Gauss-Legendre rule with N points per coordinate over a box.
template <std::size_t N, typename F>
double tensor_gauss(F&& f, std::span<const double> lo, std::span<const double> hi) {
  using G = boost::math::quadrature::gauss<double, N>;
  std::vector<double> x, w;
  const auto& ab = G::abscissa();
  const auto& wt = G::weights();
  for (std::size_t i = 0; i < ab.size(); ++i) {
    if (ab[i] == 0.0) {
      x.push_back(0.0);
      w.push_back(wt[i]);
    } else {
      x.push_back(ab[i]);
      w.push_back(wt[i]);
      x.push_back(-ab[i]);
      w.push_back(wt[i]);
    }
  }
  const std::size_t m = lo.size();
  std::vector<std::size_t> idx(m, 0);
  std::vector<double> t(m);
  std::vector<double> terms;
  for (;;) {
    double weight = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double mid = 0.5 * (lo[j] + hi[j]), half = 0.5 * (hi[j] - lo[j]);
      t[j] = mid + half * x[idx[j]];
      weight *= half * w[idx[j]];
    }
    terms.push_back(weight * f(std::span<const double>(t)));
    std::size_t j = 0;
    while (j < m && ++idx[j] == x.size()) idx[j++] = 0;
    if (j == m) break;
  }
  return pairwise_sum(terms);
}

}  // namespace dilated

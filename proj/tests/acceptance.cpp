// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "dilated/dilated.hpp"

using namespace dilated;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f s > %.0f s", secs, budget_s);
  o.check(secs < budget_s, buf);
  if (!o.pass) ++failures;
  std::printf("criterion %2d %-26s %s  (%.2f s)%s%s\n", id, name, o.pass ? "PASS" : "FAIL", secs,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

SparseSymbol one_minus(std::size_t m, const MultiIndex& k, double c) {
  SparseSymbol a(m);
  a.add(MultiIndex(m), 1.0);
  a.add(k, -c);
  return a;
}

SparseSymbol random_symbol(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  SparseSymbol a(3);
  a.add(MultiIndex(3), cplx(1.0, u(rng)));
  for (int k = 0; k < 6; ++k) {
    MultiIndex alpha(3);
    for (std::size_t j = 0; j < 3; ++j) alpha[j] = static_cast<int>(rng() % 3);
    if (!alpha.is_zero()) a.add(alpha, cplx(u(rng), u(rng)));
  }
  return a;
}

UnivariatePolynomial one_minus_z_pow(int mu) {
  const cplx root = 1.0;
  std::vector<cplx> roots(static_cast<std::size_t>(mu), root);
  return UnivariatePolynomial::from_roots(roots, mu % 2 ? -1.0 : 1.0);
}

TorusWeight constant_weight(std::size_t m) {
  SparseSymbol a(m);
  a.add(MultiIndex(m), 1.0);
  return weight_from_symbol(a, false);
}

}  // namespace

int main() {
  criterion(1, "verdict conformance", 1, [](Outcome& o) {
    struct Case {
      const char* label;
      UnivariatePolynomial a;
      bool basis;
      Tri complete;
    };
    const Case cases[] = {
        {"2-z", {2.0, -1.0}, true, Tri::Yes},
        {"1-z", {1.0, -1.0}, false, Tri::Yes},
        {"1-2z", {1.0, -2.0}, false, Tri::No},
        {"(1-z)^2(2-z)", {2.0, -5.0, 4.0, -1.0}, false, Tri::Yes},
        {"(1-z)(3-z)", {3.0, -4.0, 1.0}, false, Tri::Yes},
    };
    for (const auto& c : cases) {
      const auto v = basis_verdict({c.a, 2, c.label});
      o.check(v.basis == c.basis && v.complete == c.complete && v.minimal, c.label);
    }
  });

  criterion(2, "dual-norm growth", 10, [](Outcome& o) {
    for (int mu = 1; mu <= 3; ++mu) {
      const DilationSystemSpec s{one_minus_z_pow(mu), 2, ""};
      const auto norms = dual_chain_norms(s, 10000);
      const auto fit = exponent_fit(norms, 100);
      o.check(std::abs(fit.exponent - (mu - 0.5)) <= 0.05, "mu=" + std::to_string(mu) + fmt(" exponent %.4f", fit.exponent));
    }
    const auto n1 = dual_chain_norms({one_minus_z_pow(1), 2, ""}, 3).norm_sq[3];
    const auto n2 = dual_chain_norms({one_minus_z_pow(2), 2, ""}, 3).norm_sq[3];
    o.check(std::abs(n1 - 4.0) <= 4e-12, fmt("|Phi_3|^2 = %.17g for mu=1", n1));
    o.check(std::abs(n2 - 30.0) <= 30e-12, fmt("|Phi_3|^2 = %.17g for mu=2", n2));
  });

  criterion(3, "biorthogonality", 5, [](Outcome& o) {
    const MultiIndex upper{4, 4, 4};
    const SparseSymbol symbols[] = {EStarSymbol::uniform(3).symbol(), random_symbol(1), random_symbol(2)};
    for (const auto& a : symbols) {
      const double r = biorthogonality_suite(a, upper);
      o.check(r <= 1e-10, fmt("residual %.3g", r));
    }
  });

  criterion(4, "incompleteness witness", 1, [](Outcome& o) {
    const auto w = incompleteness_witness({{1.0, -2.0}, 2, ""}, std::nullopt, 30, 64);
    o.check(w.max_residual <= 1e-8, fmt("residual %.3g", w.max_residual));
    o.check(w.max_residual <= w.residual_bound, fmt("bound %.3g", w.residual_bound));
  });

  criterion(5, "H2 dichotomy", 60, [](Outcome& o) {
    const auto v3 = h2_verdict(shell_sums(EStarSymbol::uniform(3).symbol(), 256));
    o.check(std::abs(v3.slope + 1.0) <= 0.15, fmt("m=3 slope %.4f", v3.slope));
    o.check(v3.verdict == H2Membership::NonMember && v3.log_fit_r2 > 0.99, "m=3 partial sums not log-divergent");
    const auto v4 = h2_verdict(shell_sums(EStarSymbol::uniform(4).symbol(), 256));
    o.check(std::abs(v4.slope + 1.5) <= 0.15, fmt("m=4 slope %.4f", v4.slope));
    o.check(v4.verdict == H2Membership::Member && v4.cauchy_tail < 0.05, fmt("m=4 tail %.4f", v4.cauchy_tail));
  });

  criterion(6, "Riesz dichotomy", 30, [](Outcome& o) {
    for (const auto& a : {one_minus(1, {1}, 0.5), one_minus(2, {1, 1}, 0.5)}) {
      const auto v = riesz_basis_verdict(a);
      o.check(v.riesz == Tri::Yes, a.str() + " not riesz");
      for (double c : v.evidence.condition) o.check(c <= 9.0 + 1e-6, fmt("condition %.9g", c));
    }
    for (const auto& a : {EStarSymbol::uniform(3).symbol(), one_minus(1, {1}, 1.0)}) {
      const auto v = riesz_basis_verdict(a);
      o.check(v.riesz == Tri::No, a.str() + " not rejected");
      const auto& lm = v.evidence.lambda_min;
      o.check(lm.size() == 5, "expected 5 sections");
      for (std::size_t i = 1; i < lm.size(); ++i) o.check(lm[i] < lm[i - 1], "lambda_min not decreasing");
    }
  });

  criterion(7, "partial sums", 600, [](Outcome& o) {
    std::vector<MultiIndex> taus;
    for (int n = 0; n <= 5; ++n) taus.push_back(MultiIndex::diagonal(4, n));
    std::vector<Warning> warnings;
    const auto reps = partial_sum_norms(EStarSymbol::uniform(4).symbol(), taus, PartialSumOptions{}, &warnings);
    o.check(std::abs(reps[0].norm - std::sqrt(1.25)) <= 1e-6, fmt("|Sigma(0)| = %.12g", reps[0].norm));
    for (std::size_t i = 2; i < reps.size(); ++i)
      o.check(reps[i].norm > reps[i - 1].norm, "not increasing at n=" + std::to_string(i));
    for (std::size_t i = 1; i < reps.size(); ++i) {
      const double change = std::abs(reps[i].enlarged_norm - reps[i].norm) / reps[i].norm;
      o.check(change <= 0.02 && reps[i].converged, fmt("exhaustion change %.3g", change));
    }
  });

  criterion(8, "integral criterion", 60, [](Outcome& o) {
    const auto r4 = integral_test(4, 0.5);
    o.check(r4.reduced && *r4.reduced == kPi / 8, "reduced form != pi/8");
    for (std::size_t m : {4, 5}) {
      const auto r = integral_test(m, 0.5);
      const double ratio = r.direct_estimate / *r.reduced;
      o.check(ratio >= 0.2 && ratio <= 5.0, "m=" + std::to_string(m) + fmt(" direct/reduced = %.3g", ratio));
    }
    const auto r3 = integral_test(3, 0.5);
    o.check(r3.divergent && r3.verdict == "divergent", "m=3 not flagged divergent");
  });

  criterion(9, "A2 evidence", 120, [](Outcome& o) {
    A2Options opt;
    const auto flat = a2_estimate(constant_weight(2), opt);
    for (const auto& s : flat.scales) o.check(s.sup == 1.0, fmt("constant weight sup %.17g", s.sup));
    SparseSymbol edge(1);
    edge.add({0}, 1.0);
    edge.add({1}, -1.0);
    const auto div = a2_estimate(weight_from_symbol(edge), opt);
    for (const auto& s : div.scales)
      o.check(s.status == QuadStatus::Diverging, "1D zero not diverging at s=" + std::to_string(s.s));
    A2Options e4;
    e4.s_min = 3;
    e4.s_max = 8;
    const auto est = a2_estimate(weight_from_estar(EStarSymbol::uniform(4)), e4);
    for (std::size_t i = 1; i < est.scales.size(); ++i) {
      const double g = est.scales[i].sup / est.scales[i - 1].sup;
      o.check(g >= 1.2, "s=" + std::to_string(est.scales[i].s) + fmt(" growth %.3f", g));
    }
  });

  criterion(10, "Q_M sanity", 300, [](Outcome& o) {
    for (std::size_t m : {1, 2, 3}) {
      const auto w = constant_weight(m);
      std::vector<std::uint64_t> primes = {2, 3, 5};
      primes.resize(m);
      std::vector<double> mu(m, 0.0);
      mu[0] = 1.0;
      for (int n = 0; n <= 5; ++n) {
        const double a = qm_projection_norm(w, LinearForm::from_primes(primes), n).norm;
        const double b = qm_projection_norm(w, LinearForm::rational_form(mu), n).norm;
        o.check(std::abs(a - 1.0) <= 1e-10 && std::abs(b - 1.0) <= 1e-10, fmt("unweighted norm %.15g", a));
      }
    }
    for (std::size_t m : {2, 3}) {
      const auto w = weight_from_estar(EStarSymbol::uniform(m));
      std::vector<std::uint64_t> primes = {2, 3, 5};
      primes.resize(m);
      for (int n = 1; n <= (m == 2 ? 5 : 3); ++n) {
        const auto r = qm_projection_norm(w, LinearForm::from_primes(primes), n);
        o.check(std::isfinite(r.norm) && r.norm >= 1.0 - 1e-9 && r.kept > 0, fmt("weighted norm %.6g", r.norm));
      }
      std::vector<MultiIndex> taus;
      for (int t = 1; t <= 3; ++t) taus.push_back(MultiIndex::diagonal(m, t));
      const auto reps = weighted_partial_sum_norms(w, taus, 5);
      o.check(reps.size() == taus.size(), "incomplete weighted-sections table");
      for (const auto& r : reps) o.check(std::isfinite(r.norm) && r.norm >= 1.0 - 1e-9, fmt("section norm %.6g", r.norm));
    }
  });

  criterion(11, "infrastructure", 60, [](Outcome& o) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> idx(1, 1'000'000);
    std::normal_distribution<double> val(0.0, 1.0);
    const std::uint64_t primes[] = {2, 3};
    for (int trial = 0; trial < 100; ++trial) {
      std::map<std::uint64_t, cplx> f;
      for (int k = 0; k < 100; ++k) f[idx(rng)] += cplx(val(rng), val(rng));
      double norm = 0.0;
      for (const auto& [n, v] : f) norm += std::norm(v);
      const double d = omega_parseval_check(f, primes);
      o.check(d <= 1e-12 * norm, fmt("Parseval discrepancy %.3g", d));
    }
    bool exact = true;
    for (std::uint64_t n = 1; n <= 1'000'000 && exact; ++n) exact = omega_decompose(n, primes).reconstruct(primes) == n;
    o.check(exact, "omega round trip");
    Table t{"t", {"x", "k", "s"}, {}};
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i)
      t.add({u(rng) * std::pow(10.0, static_cast<double>(rng() % 600) - 300.0), static_cast<std::int64_t>(rng()),
             std::string("row,\"") + std::to_string(i)});
    const auto rows = parse_csv(to_csv(t));
    bool lossless = rows.size() == t.rows.size() + 1 && rows[0] == t.columns;
    for (std::size_t i = 0; lossless && i < t.rows.size(); ++i)
      lossless = std::stod(rows[i + 1][0]) == std::get<double>(t.rows[i][0]) &&
                 std::stoll(rows[i + 1][1]) == std::get<std::int64_t>(t.rows[i][1]) &&
                 rows[i + 1][2] == std::get<std::string>(t.rows[i][2]);
    o.check(lossless, "CSV round trip");
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

#pragma once

#include <chrono>
#include <cstdint>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "dilated/dilation1d.hpp"
#include "dilated/error.hpp"
#include "dilated/io.hpp"
#include "dilated/polydisk.hpp"
#include "dilated/weighted_torus.hpp"

#ifndef DILATED_VERSION
#define DILATED_VERSION "0.1.0"
#endif

namespace dilated {

using json = nlohmann::ordered_json;

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"analyze1d", "duals", "witness", "series", "riesz",
                                                 "sigma-norms", "a2", "integral", "qm", "weighted-sections"};
  return names;
}

/// Exit codes: 0 success, 2 validation, 3 numerical failure, 4 size limit.
constexpr int exit_code(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::SizeLimit: return 4;
    case ErrorKind::NonConvergence:
    case ErrorKind::GramNotPositive:
    case ErrorKind::BoundedSequence: return 3;
    default: return 2;
  }
}

struct SymbolTerm {
  std::vector<int> exponents;
  cplx value;
};

/// Every run parameter. Zero or negative sizes mean "command default" and are
/// replaced by resolve(), so the echoed config is complete.
struct RunConfig {
  std::string command;
  std::vector<cplx> coeffs;
  std::uint64_t prime = 2;
  std::vector<SymbolTerm> terms;
  std::vector<double> estar;
  std::vector<std::uint64_t> primes;
  int m = 0;
  std::string weight = "symbol";  // symbol | model
  double root_tol = 1e-8;
  double residual_tol = 1e-10;
  double slope_margin = 0.1;
  int n = 0;
  int n_max = 0;
  int tau_min = 100;
  int tau_max = 10000;
  std::vector<std::vector<int>> taus;
  int s_min = 1;
  int s_max = 8;
  int random_centers = 4;
  std::uint64_t seed = 20160621;
  double delta = 0.5;
  std::string method = "ball";  // ball | polar
  std::string form = "primes";  // primes | rational
  std::vector<double> mu;
  int root = 0;
  int grid_density = 24;
  std::string mode = "auto";  // auto | full | streaming
  std::string format;         // json | csv | plot
  std::string json_path;
  std::string csv_path;
  std::string plot_path;

  void resolve() {
    const auto& names = command_names();
    require(std::find(names.begin(), names.end(), command) != names.end(), ErrorKind::InvalidArgument,
            "unknown command '" + command + "'");
    auto dflt = [](int& v, int d) {
      if (v <= 0) v = d;
    };
    if (command == "analyze1d") dflt(n, 64);
    if (command == "witness") dflt(n, 30);
    if (command == "series") dflt(n, 256);
    if (command == "sigma-norms") dflt(n_max, 5);
    if (command == "qm") dflt(n_max, 5);
    if (command == "weighted-sections") {
      dflt(n_max, 4);
      if (n < n_max) n = n_max + 2;
    }
    if (format.empty()) format = command == "integral" ? "csv" : "json";
    require(format == "json" || format == "csv" || format == "plot", ErrorKind::InvalidArgument,
            "format must be json, csv or plot");
    require(weight == "symbol" || weight == "model", ErrorKind::InvalidArgument, "weight must be symbol or model");
    require(method == "ball" || method == "polar", ErrorKind::InvalidArgument, "method must be ball or polar");
    require(form == "primes" || form == "rational", ErrorKind::InvalidArgument, "form must be primes or rational");
    require(mode == "auto" || mode == "full" || mode == "streaming", ErrorKind::InvalidArgument,
            "mode must be auto, full or streaming");
    require(is_prime(prime), ErrorKind::InvalidArgument, std::to_string(prime) + " is not prime");
    require(root_tol > 0.0 && residual_tol > 0.0 && slope_margin > 0.0, ErrorKind::InvalidArgument,
            "tolerances must be positive");
    require(s_min >= 0 && s_max >= s_min && s_max <= 30, ErrorKind::InvalidArgument, "bad scale ladder");
    require(tau_min >= 1 && tau_max >= 1 && root >= 0 && random_centers >= 0, ErrorKind::InvalidArgument,
            "sizes must be positive");
  }
};

inline json cplx_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

inline cplx json_cplx(const json& j) {
  if (j.is_number()) return j.get<double>();
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(), ErrorKind::InvalidArgument,
          "complex value must be a number or [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const RunConfig& c) {
  json j;
  j["schema"] = 1;
  j["command"] = c.command;
  j["coeffs"] = json::array();
  for (cplx z : c.coeffs) j["coeffs"].push_back(cplx_json(z));
  j["prime"] = c.prime;
  j["terms"] = json::array();
  for (const auto& t : c.terms) j["terms"].push_back(json::array({t.exponents, t.value.real(), t.value.imag()}));
  j["estar"] = c.estar;
  j["primes"] = c.primes;
  j["m"] = c.m;
  j["weight"] = c.weight;
  j["root_tol"] = c.root_tol;
  j["residual_tol"] = c.residual_tol;
  j["slope_margin"] = c.slope_margin;
  j["n"] = c.n;
  j["n_max"] = c.n_max;
  j["tau_min"] = c.tau_min;
  j["tau_max"] = c.tau_max;
  j["taus"] = c.taus;
  j["s_min"] = c.s_min;
  j["s_max"] = c.s_max;
  j["random_centers"] = c.random_centers;
  j["seed"] = c.seed;
  j["delta"] = c.delta;
  j["method"] = c.method;
  j["form"] = c.form;
  j["mu"] = c.mu;
  j["root"] = c.root;
  j["grid_density"] = c.grid_density;
  j["mode"] = c.mode;
  j["output"] = {{"format", c.format}, {"json", c.json_path}, {"csv", c.csv_path}, {"plot", c.plot_path}};
  return j;
}

/// Strict parse: schema must be 1 and unknown keys are rejected.
inline RunConfig config_from_json(const json& j) {
  require(j.is_object(), ErrorKind::InvalidArgument, "config must be a JSON object");
  require(j.contains("schema") && j["schema"] == 1, ErrorKind::InvalidArgument, "config needs \"schema\": 1");
  static const std::set<std::string> known = {
      "schema", "command", "coeffs", "prime", "terms", "estar", "primes", "m", "weight", "root_tol",
      "residual_tol", "slope_margin", "n", "n_max", "tau_min", "tau_max", "taus", "s_min", "s_max",
      "random_centers", "seed", "delta", "method", "form", "mu", "root", "grid_density", "mode", "output"};
  for (const auto& [k, v] : j.items())
    require(known.count(k) > 0, ErrorKind::InvalidArgument, "unknown config key '" + k + "'");
  RunConfig c;
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("command", c.command);
    if (j.contains("coeffs"))
      for (const auto& z : j["coeffs"]) c.coeffs.push_back(json_cplx(z));
    get("prime", c.prime);
    if (j.contains("terms"))
      for (const auto& t : j["terms"]) {
        require(t.is_array() && (t.size() == 2 || t.size() == 3), ErrorKind::InvalidArgument,
                "term must be [exponents, re, im]");
        SymbolTerm s;
        t[0].get_to(s.exponents);
        s.value = {t[1].get<double>(), t.size() == 3 ? t[2].get<double>() : 0.0};
        c.terms.push_back(std::move(s));
      }
    get("estar", c.estar);
    get("primes", c.primes);
    get("m", c.m);
    get("weight", c.weight);
    get("root_tol", c.root_tol);
    get("residual_tol", c.residual_tol);
    get("slope_margin", c.slope_margin);
    get("n", c.n);
    get("n_max", c.n_max);
    get("tau_min", c.tau_min);
    get("tau_max", c.tau_max);
    get("taus", c.taus);
    get("s_min", c.s_min);
    get("s_max", c.s_max);
    get("random_centers", c.random_centers);
    get("seed", c.seed);
    get("delta", c.delta);
    get("method", c.method);
    get("form", c.form);
    get("mu", c.mu);
    get("root", c.root);
    get("grid_density", c.grid_density);
    get("mode", c.mode);
    if (j.contains("output")) {
      const auto& o = j["output"];
      require(o.is_object(), ErrorKind::InvalidArgument, "output must be an object");
      for (const auto& [k, v] : o.items())
        require(k == "format" || k == "json" || k == "csv" || k == "plot", ErrorKind::InvalidArgument,
                "unknown output key '" + k + "'");
      if (o.contains("format")) o["format"].get_to(c.format);
      if (o.contains("json")) o["json"].get_to(c.json_path);
      if (o.contains("csv")) o["csv"].get_to(c.csv_path);
      if (o.contains("plot")) o["plot"].get_to(c.plot_path);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("config: ") + e.what());
  }
  return c;
}

struct RunResult {
  json records = json::array();
  std::vector<Table> tables;
  std::vector<PlotSeries> plots;
  std::vector<Warning> warnings;

  void record(const std::string& op, json params, json result) {
    records.push_back({{"operation", op}, {"parameters", std::move(params)}, {"result", std::move(result)}});
  }
};

inline json table_json(const Table& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = json::array();
    for (const auto& c : r) std::visit([&](const auto& v) { row.push_back(v); }, c);
    rows.push_back(std::move(row));
  }
  return {{"name", t.name}, {"columns", t.columns}, {"rows", std::move(rows)}};
}

inline json warnings_json(const std::vector<Warning>& ws) {
  json a = json::array();
  for (const auto& w : ws) a.push_back({{"kind", w.kind}, {"message", w.message}});
  return a;
}

namespace detail {

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline DilationSystemSpec spec_1d(const RunConfig& c) {
  require(!c.coeffs.empty(), ErrorKind::InvalidArgument, "this command needs --coeffs");
  DilationSystemSpec s;
  s.coeffs = UnivariatePolynomial(c.coeffs);
  s.prime = c.prime;
  s.validate();
  return s;
}

/// Symbol from terms, else E* weights, else uniform E* of arity m, else the 1D coefficients.
inline SparseSymbol symbol_of(const RunConfig& c) {
  if (!c.terms.empty()) {
    const std::size_t m = c.terms.front().exponents.size();
    SparseSymbol a(m);
    for (const auto& t : c.terms) a.add(MultiIndex(t.exponents), t.value);
    if (!c.primes.empty()) a.set_primes(c.primes);
    return a;
  }
  if (!c.estar.empty()) return EStarSymbol{c.estar}.symbol();
  if (c.m > 0) return EStarSymbol::uniform(static_cast<std::size_t>(c.m)).symbol();
  if (!c.coeffs.empty()) return SparseSymbol::from_univariate(UnivariatePolynomial(c.coeffs));
  throw Error(ErrorKind::InvalidArgument, "this command needs a symbol: --term, --estar, --m or --coeffs");
}

inline TorusWeight weight_of(const RunConfig& c) {
  if (c.weight == "model") {
    require(c.m >= 1, ErrorKind::InvalidArgument, "the model weight needs --m");
    return model_weight(static_cast<std::size_t>(c.m));
  }
  if (c.terms.empty() && (!c.estar.empty() || c.m > 0))
    return weight_from_estar(c.estar.empty() ? EStarSymbol::uniform(static_cast<std::size_t>(c.m)) : EStarSymbol{c.estar});
  return weight_from_symbol(symbol_of(c));
}

inline std::vector<MultiIndex> tau_list(const RunConfig& c, std::size_t m, int from) {
  std::vector<MultiIndex> taus;
  if (!c.taus.empty()) {
    for (const auto& t : c.taus) {
      require(t.size() == m, ErrorKind::InvalidArgument, "tau arity mismatch");
      taus.emplace_back(t);
    }
  } else {
    for (int n = from; n <= c.n_max; ++n) taus.push_back(MultiIndex::diagonal(m, n));
  }
  return taus;
}

inline json roots_json(const RootClassification& cls) {
  json a = json::array();
  for (const auto& r : cls.roots)
    a.push_back({{"re", r.location.real()}, {"im", r.location.imag()}, {"multiplicity", r.multiplicity},
                 {"class", to_string(r.tag)}, {"modulus_margin", r.modulus_margin}, {"residual", r.residual}});
  return a;
}

inline void run_analyze1d(const RunConfig& c, RunResult& out) {
  const auto spec = spec_1d(c);
  const auto v = basis_verdict(spec, c.root_tol, static_cast<std::size_t>(c.n));
  json r = {{"basis", yes_no(v.basis)}, {"complete", to_string(v.complete)}, {"minimal", yes_no(v.minimal)},
            {"reasons", v.reasons}, {"roots", roots_json(v.classification)}};
  r["kappa_star"] = v.classification.kappa_star ? json(*v.classification.kappa_star) : json(nullptr);
  r["delta"] = v.classification.delta ? json(*v.classification.delta) : json(nullptr);
  if (v.evidence)
    r["gram"] = {{"size", v.evidence->size}, {"lambda_min", v.evidence->extremes.min},
                 {"lambda_max", v.evidence->extremes.max}, {"condition", v.evidence->condition()}};
  out.record("basis_verdict", {{"tol", c.root_tol}, {"evidence_n", c.n}, {"prime", c.prime}}, r);
  out.warnings.insert(out.warnings.end(), v.classification.warnings.begin(), v.classification.warnings.end());
  Table t{"roots", {"re", "im", "multiplicity", "class", "modulus_margin"}, {}};
  for (const auto& x : v.classification.roots)
    t.add({x.location.real(), x.location.imag(), std::int64_t{x.multiplicity}, std::string(to_string(x.tag)),
           x.modulus_margin});
  out.tables.push_back(std::move(t));
}

inline void run_duals(const RunConfig& c, RunResult& out) {
  const auto spec = spec_1d(c);
  const auto norms = dual_chain_norms(spec, static_cast<std::size_t>(c.tau_max));
  Table t{"dual_norms", {"tau", "norm_sq", "norm"}, {}};
  PlotSeries p{"log_norm_vs_log_tau", {}, {}};
  for (std::size_t tau = 0; tau <= norms.tau_max(); ++tau) {
    t.add({static_cast<std::int64_t>(tau), norms.norm_sq[tau], norms.norm(tau)});
    if (tau >= 1) {
      p.x.push_back(std::log(static_cast<double>(tau)));
      p.y.push_back(std::log(norms.norm(tau)));
    }
  }
  json r = {{"tau_max", norms.tau_max()}, {"omega", norms.omega}, {"final_norm_sq", norms.norm_sq.back()}};
  if (norms.overflow_at) r["overflow_at"] = *norms.overflow_at;
  try {
    const auto fit = exponent_fit(norms, static_cast<std::size_t>(c.tau_min));
    r["bounded"] = false;
    r["exponent"] = fit.exponent;
    r["ci"] = {fit.ci_low, fit.ci_high};
    r["fit_range"] = {fit.tau_lo, fit.tau_hi};
    r["r_squared"] = fit.r_squared;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BoundedSequence) throw;
    r["bounded"] = true;
    r["exponent"] = nullptr;
  }
  out.record("dual_chain_norms", {{"tau_max", c.tau_max}, {"tau_min", c.tau_min}, {"prime", c.prime}}, r);
  out.tables.push_back(std::move(t));
  out.plots.push_back(std::move(p));
}

inline void run_witness(const RunConfig& c, RunResult& out) {
  const auto spec = spec_1d(c);
  const auto w = incompleteness_witness(spec, static_cast<std::size_t>(c.root), static_cast<std::size_t>(c.n), 64,
                                        c.root_tol);
  out.record("incompleteness_witness", {{"truncation", c.n}, {"root", c.root}, {"n_test", 64}},
             {{"root", cplx_json(w.root)}, {"omega", w.omega}, {"max_residual", w.max_residual},
              {"residual_bound", w.residual_bound}, {"within_bound", w.max_residual <= w.residual_bound}});
  Table t{"witness", {"k", "index", "re", "im"}, {}};
  std::uint64_t idx = w.omega;
  for (std::size_t k = 0; k < w.coeffs.size(); ++k, idx *= spec.prime)
    t.add({static_cast<std::int64_t>(k), static_cast<std::int64_t>(idx), w.coeffs[k].real(), w.coeffs[k].imag()});
  out.tables.push_back(std::move(t));
}

inline void run_series(const RunConfig& c, RunResult& out) {
  const auto a = symbol_of(c);
  std::optional<SeriesMode> mode;
  if (c.mode == "full") mode = SeriesMode::Full;
  if (c.mode == "streaming") mode = SeriesMode::Streaming;
  const auto sh = shell_sums(a, static_cast<std::size_t>(c.n), mode);
  H2Options opt;
  opt.margin = c.slope_margin;
  const auto v = h2_verdict(sh, opt);
  Table t{"shell_sums", {"n", "s_n", "partial_sum"}, {}};
  PlotSeries p{"log_s_n_vs_log_n", {}, {}};
  for (std::size_t k = 0; k < sh.s.size(); ++k) {
    t.add({static_cast<std::int64_t>(k), sh.s[k], sh.partial[k]});
    if (k >= 1 && sh.s[k] > 0.0) {
      p.x.push_back(std::log(static_cast<double>(k)));
      p.y.push_back(std::log(sh.s[k]));
    }
  }
  json r = {{"verdict", to_string(v.verdict)}, {"slope", v.slope}, {"fit_range", {sh.fit_lo, sh.fit_hi}},
            {"cauchy_tail", v.cauchy_tail}, {"log_fit_r2", v.log_fit_r2}, {"increment_ratio", v.increment_ratio},
            {"partial_sum", v.total}, {"reasons", v.reasons}};
  r["extrapolated_total"] = v.extrapolated_total ? json(*v.extrapolated_total) : json(nullptr);
  out.record("h2_verdict", {{"cutoff", c.n}, {"slope_margin", c.slope_margin}, {"mode", c.mode}}, r);
  out.tables.push_back(std::move(t));
  out.plots.push_back(std::move(p));
}

inline void run_riesz(const RunConfig& c, RunResult& out) {
  const auto a = symbol_of(c);
  RieszOptions opt;
  opt.grid_density = static_cast<std::size_t>(std::max(2, c.grid_density));
  const auto v = riesz_basis_verdict(a, opt);
  json arg = json::array();
  for (cplx z : v.argmin) arg.push_back(cplx_json(z));
  out.record("riesz_basis_verdict", {{"grid_density", c.grid_density}},
             {{"riesz", v.riesz == Tri::Unknown ? "uncertain" : to_string(v.riesz)}, {"min_modulus", v.min_modulus},
              {"argmin", arg}, {"scale", v.scale}, {"reasons", v.reasons}});
  Table t{"gram_evidence", {"box", "lambda_min", "lambda_max", "condition"}, {}};
  for (std::size_t i = 0; i < v.evidence.boxes.size(); ++i)
    t.add({v.evidence.boxes[i].str(), v.evidence.lambda_min[i], v.evidence.lambda_max[i], v.evidence.condition[i]});
  out.tables.push_back(std::move(t));
}

inline void run_sigma(const RunConfig& c, RunResult& out) {
  const auto a = symbol_of(c);
  const auto taus = tau_list(c, a.arity(), 0);
  const auto reps = partial_sum_norms(a, taus, PartialSumOptions{}, &out.warnings);
  Table t{"sigma_norms", {"tau", "norm", "enlarged_norm", "exhausted", "rank_one_product", "rank_one_matrix"}, {}};
  PlotSeries p{"sigma_norm_vs_n", {}, {}};
  for (const auto& r : reps) {
    t.add({r.tau.str(), r.norm, r.enlarged_norm, std::string(r.exhausted ? "yes" : "no"), r.rank_one_product,
           r.rank_one_matrix});
    p.x.push_back(r.tau.max_entry());
    p.y.push_back(r.norm);
  }
  out.record("partial_sum_norms", {{"n_max", c.n_max}, {"slack", 2}, {"rel_tol", 1e-6}}, {{"count", reps.size()}});
  out.tables.push_back(std::move(t));
  out.plots.push_back(std::move(p));
}

inline void run_a2(const RunConfig& c, RunResult& out) {
  const auto w = weight_of(c);
  A2Options opt;
  opt.s_min = c.s_min;
  opt.s_max = c.s_max;
  opt.random_centers = static_cast<std::size_t>(c.random_centers);
  opt.seed = c.seed;
  const auto rep = a2_estimate(w, opt);
  Table t{"a2", {"scale", "h", "sup_estimate", "status"}, {}};
  PlotSeries p{"log2_sup_vs_scale", {}, {}};
  for (const auto& s : rep.scales) {
    t.add({std::int64_t{s.s}, s.h, s.sup, std::string(to_string(s.status))});
    p.x.push_back(s.s);
    p.y.push_back(std::log2(s.sup));
  }
  out.record("a2_estimate", {{"weight", to_string(w.kind)}, {"s_min", c.s_min}, {"s_max", c.s_max},
                             {"random_centers", c.random_centers}, {"seed", c.seed}},
             {{"rectangles", rep.rectangles.size()}});
  out.warnings.insert(out.warnings.end(), rep.warnings.begin(), rep.warnings.end());
  out.tables.push_back(std::move(t));
  out.plots.push_back(std::move(p));
}

inline void run_integral(const RunConfig& c, RunResult& out) {
  require(c.m >= 2, ErrorKind::InvalidArgument, "integral needs --m >= 2");
  IntegralOptions opt;
  opt.method = c.method == "polar" ? IntegralMethod::Polar : IntegralMethod::Ball;
  opt.seed = c.seed;
  const auto r = integral_test(static_cast<std::size_t>(c.m), c.delta, opt);
  Table t{"integral", {"m", "delta", "method", "reduced", "direct_estimate", "verdict"}, {}};
  t.add({std::int64_t{c.m}, c.delta, c.method, r.reduced ? Cell(*r.reduced) : Cell(std::string("divergent")),
         r.direct_estimate, r.verdict});
  PlotSeries p{"estimate_vs_log10_cutoff", {}, {}};
  for (std::size_t k = 0; k < r.estimates.size(); ++k) {
    p.x.push_back(std::log10(r.cutoffs[k]));
    p.y.push_back(r.estimates[k]);
  }
  out.record("integral_test", {{"m", c.m}, {"delta", c.delta}, {"method", c.method}, {"seed", c.seed}},
             {{"reduced", r.reduced ? json(*r.reduced) : json(nullptr)}, {"direct_estimate", r.direct_estimate},
              {"estimates", r.estimates}, {"cutoffs", r.cutoffs}, {"verdict", r.verdict}});
  out.tables.push_back(std::move(t));
  out.plots.push_back(std::move(p));
}

inline void run_qm(const RunConfig& c, RunResult& out) {
  const auto w = weight_of(c);
  LinearForm form;
  if (c.form == "rational") {
    std::vector<double> mu = c.mu;
    if (mu.empty()) {
      mu.assign(w.arity, 0.0);
      mu[0] = 1.0;
    }
    form = LinearForm::rational_form(mu);
  } else {
    std::vector<std::uint64_t> primes = c.primes;
    if (primes.empty())
      for (std::uint64_t p = 2; primes.size() < w.arity; ++p)
        if (is_prime(p)) primes.push_back(p);
    form = LinearForm::from_primes(primes);
  }
  Table t{"qm", {"n", "dim", "kept", "norm", "quadrature_error", "method"}, {}};
  PlotSeries p{"qm_norm_vs_n", {}, {}};
  for (int n = 1; n <= c.n_max; ++n) {
    const auto r = qm_projection_norm(w, form, n);
    t.add({std::int64_t{n}, static_cast<std::int64_t>(r.dim), static_cast<std::int64_t>(r.kept), r.norm,
           r.quadrature_error, r.method});
    p.x.push_back(n);
    p.y.push_back(r.norm);
  }
  out.record("qm_projection_norm", {{"weight", to_string(w.kind)}, {"form", c.form}, {"n_max", c.n_max}},
             {{"exploratory", true}, {"rows", t.rows.size()}});
  out.tables.push_back(std::move(t));
  out.plots.push_back(std::move(p));
}

inline void run_weighted(const RunConfig& c, RunResult& out) {
  const auto w = weight_of(c);
  const auto taus = tau_list(c, w.arity, 1);
  const auto reps = weighted_partial_sum_norms(w, taus, c.n);
  Table t{"weighted_sections", {"tau", "box", "dim", "kept", "norm", "quadrature_error"}, {}};
  PlotSeries p{"weighted_norm_vs_n", {}, {}};
  for (const auto& r : reps) {
    t.add({r.tau.str(), std::int64_t{r.n}, static_cast<std::int64_t>(r.dim), static_cast<std::int64_t>(r.kept), r.norm,
           r.quadrature_error});
    p.x.push_back(r.tau.max_entry());
    p.y.push_back(r.norm);
  }
  out.record("weighted_partial_sum_norms", {{"weight", to_string(w.kind)}, {"box", c.n}}, {{"rows", t.rows.size()}});
  out.tables.push_back(std::move(t));
  out.plots.push_back(std::move(p));
}

}  // namespace detail

/// Runs one resolved command. Library errors propagate as dilated::Error.
inline RunResult execute(const RunConfig& c) {
  RunResult out;
  if (c.command == "analyze1d") detail::run_analyze1d(c, out);
  else if (c.command == "duals") detail::run_duals(c, out);
  else if (c.command == "witness") detail::run_witness(c, out);
  else if (c.command == "series") detail::run_series(c, out);
  else if (c.command == "riesz") detail::run_riesz(c, out);
  else if (c.command == "sigma-norms") detail::run_sigma(c, out);
  else if (c.command == "a2") detail::run_a2(c, out);
  else if (c.command == "integral") detail::run_integral(c, out);
  else if (c.command == "qm") detail::run_qm(c, out);
  else if (c.command == "weighted-sections") detail::run_weighted(c, out);
  else throw Error(ErrorKind::InvalidArgument, "unknown command '" + c.command + "'");
  return out;
}

/// Config echo, version, wall clock, records, tables and warnings.
inline json envelope(const RunConfig& c, const RunResult& r, double seconds) {
  json tables = json::array();
  for (const auto& t : r.tables) tables.push_back(table_json(t));
  return {{"tool", "dilated_basis"},        {"version", DILATED_VERSION}, {"config", to_json(c)},
          {"wall_clock_seconds", seconds}, {"records", r.records},       {"tables", std::move(tables)},
          {"warnings", warnings_json(r.warnings)}};
}

/// Resolves, executes and writes the requested artifacts. Returns the exit code;
/// diagnostics go to err.
inline int run(RunConfig c, std::ostream& out, std::ostream& err) {
  try {
    c.resolve();
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = execute(c);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const json env = envelope(c, r, secs);
    if (!c.json_path.empty()) write_file(c.json_path, env.dump(2) + "\n");
    if (!c.csv_path.empty() && !r.tables.empty()) emit_csv(r.tables.front(), c.csv_path);
    if (!c.plot_path.empty()) emit_plotdata(r.plots, c.plot_path);
    if (c.format == "json") out << env.dump(2) << "\n";
    else if (c.format == "csv") out << (r.tables.empty() ? std::string() : to_csv(r.tables.front()));
    else out << to_plotdata(r.plots);
    for (const auto& w : r.warnings) err << "warning: " << w.kind << ": " << w.message << "\n";
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  }
}

}  // namespace dilated

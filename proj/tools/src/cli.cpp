#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "sgjms/conformal_geometry.hpp"
#include "sgjms/errors.hpp"
#include "sgjms/integral_kernels.hpp"
#include "sgjms/lane_emden.hpp"
#include "sgjms/rayleigh_optimizer.hpp"
#include "sgjms/version.hpp"

namespace sgjms::cli {

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& what) {
  throw DomainError("--" + field + ": " + what);
}

std::vector<int> parse_int_list(const std::string& text, const std::string& field) {
  std::vector<int> out;
  for (double x : parse_grid(text, field)) {
    if (x != std::floor(x) || std::abs(x) > 1e6) bad_field(field, "expected integers, got '" + text + "'");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

int single_int(const std::string& text, const std::string& field) {
  const auto v = parse_int_list(text, field);
  if (v.size() != 1) bad_field(field, "expected a single value, got '" + text + "'");
  return v[0];
}

std::optional<double> single_double(const std::string& text, const std::string& field) {
  const auto v = parse_grid(text, field);
  if (v.empty()) return std::nullopt;
  if (v.size() != 1) bad_field(field, "expected a single value, got '" + text + "'");
  return v[0];
}

SphereParams params_of(int n, int m) {
  try {
    return SphereParams::make(n, m);
  } catch (const DomainError& e) {
    throw DomainError(std::string("--m/--n: ") + e.what());
  }
}

SphereParams params_of(const RunConfig& cfg) {
  return params_of(single_int(cfg.n, "n"), single_int(cfg.m, "m"));
}

int pick(int value, int fallback) { return value >= 0 ? value : fallback; }
double pick(double value, double fallback) { return value >= 0.0 ? value : fallback; }

void check_truncation(int K, int Q) {
  if (K < 1) bad_field("K", "must be >= 1");
  if (Q >= 0 && Q <= K) bad_field("Q", "must exceed K");
}

Nonlinearity nonlinearity_of(const RunConfig& cfg, const SphereParams& P, bool required) {
  if (!cfg.f.empty()) {
    try {
      return Nonlinearity::parse(cfg.f);
    } catch (const DomainError& e) {
      bad_field("f", e.what());
    }
  }
  if (const auto p = single_double(cfg.p, "p")) {
    if (!(*p >= 1.0)) bad_field("p", "exponent must be >= 1");
    return Nonlinearity::power(*p);
  }
  if (required) bad_field("f", "give --f a1:p1,... or --p");
  return Nonlinearity::power(0.5 * (1.0 + P.critical_lane_emden_exponent()));
}

double default_sobolev_exponent(const SphereParams& P) {
  return 0.5 * (2.0 + P.critical_sobolev_exponent());
}

Json params_json(const SphereParams& P) { return Json{{"m", P.m}, {"n", P.n}}; }

Report cmd_eigenvalues(const RunConfig& cfg) {
  const SphereParams P = params_of(cfg);
  const int K = pick(cfg.K, 32);
  check_truncation(K, cfg.Q);
  const double tol = pick(cfg.tol, 1e-8);

  Report r;
  r.inputs = params_json(P);
  r.inputs["K"] = K;
  r.tolerances = {{"funk_hecke_relative", 1e-10}, {"identity", tol}};
  const GjmsSpectrum spec = gjms_eigenvalues(P, K);
  const KernelSpectrum kernel = funk_hecke_spectrum(P, K);
  const GreenConstants gc = green_constant(kernel, spec, std::numeric_limits<double>::infinity());

  r.table.header = {"k", "lambda", "mu", "g_mu_lambda"};
  Json rows = Json::array();
  for (int k = 0; k <= K; ++k) {
    const double prod = gc.g_mn * kernel.mu(k) * spec.lambda(k);
    rows.push_back({{"k", k}, {"lambda", spec.lambda(k)}, {"mu", kernel.mu(k)}, {"g_mu_lambda", prod}});
    r.table.rows.push_back({std::to_string(k), format_number(spec.lambda(k)),
                            format_number(kernel.mu(k)), format_number(prod)});
  }
  r.results = {{"c_n", gc.c_n},
               {"g_mn", gc.g_mn},
               {"max_identity_error", gc.max_identity_error},
               {"rows", std::move(rows)}};
  r.checks.push_back({"green_identity", gc.max_identity_error <= tol, gc.max_identity_error, tol, true});
  return r;
}

Report cmd_sharp_constant(const RunConfig& cfg) {
  const SphereParams P = params_of(cfg);
  const std::vector<double> grid = parse_grid(cfg.p, "p");
  for (double p : grid)
    if (!(p >= 2.0 && p <= P.critical_sobolev_exponent()))
      bad_field("p", "value " + format_number(p) + " outside [2, 2n/(n-2m)]");

  Report r;
  r.inputs = params_json(P);
  r.inputs["p"] = grid;
  r.tolerances = {{"formula", "closed form"}};
  r.table.header = {"m", "n", "p", "sharp_constant"};
  Json rows = Json::array();
  for (double p : grid) {
    const double S = sharp_constant(P.m, P.n, p);
    rows.push_back({{"p", p}, {"sharp_constant", S}});
    r.table.rows.push_back({std::to_string(P.m), std::to_string(P.n), format_number(p), format_number(S)});
  }
  r.results = {{"rows", std::move(rows)}};
  return r;
}

OptimizerConfig optimizer_config(const SphereParams& P, double p, const RunConfig& cfg, int K,
                                 int starts) {
  OptimizerConfig oc;
  oc.params = P;
  oc.p = p;
  oc.K = K;
  oc.Q = cfg.Q;
  oc.starts = starts;
  oc.seed = cfg.seed;
  oc.tol_grad = pick(cfg.tol, 1e-10);
  try {
    oc.validate();
  } catch (const DomainError& e) {
    throw DomainError(std::string("--p/--K/--Q/--starts/--tol: ") + e.what());
  }
  return oc;
}

constexpr double kValueTol = 1e-6;
constexpr double kDistanceTol = 1e-5;

Report cmd_minimize(const RunConfig& cfg) {
  const SphereParams P = params_of(cfg);
  const double p = single_double(cfg.p, "p").value_or(default_sobolev_exponent(P));
  const OptimizerConfig oc = optimizer_config(P, p, cfg, pick(cfg.K, 32), pick(cfg.starts, 20));

  Report r;
  r.inputs = params_json(P);
  r.inputs["p"] = p;
  r.inputs["starts"] = oc.starts;
  r.tolerances = {{"tol_grad", oc.tol_grad}, {"relative_error", kValueTol}, {"distance_to_constant", kDistanceTol}};
  const MinimizationResult res = minimize(oc);
  r.results = to_json(res);
  r.table = to_csv_table(res.trace);
  const double rel = std::abs(res.value - res.sharp_constant) / res.sharp_constant;
  r.checks.push_back({"relative_error", rel <= kValueTol, rel, kValueTol});
  r.checks.push_back({"distance_to_constant", res.distance_to_constant <= kDistanceTol,
                      res.distance_to_constant, kDistanceTol});
  r.checks.push_back({"grad_norm", res.converged, res.grad_norm, oc.tol_grad});
  return r;
}

ZonalFunction initial_guess(const RunConfig& cfg, const SpectralSpace& space, const Nonlinearity& f) {
  const double c = constant_solution(space.params, f).value_or(1.0);
  const double level = c > 0.0 ? c : 1.0;
  if (cfg.init == "constant") return space.constant(level);
  if (cfg.init == "perturbed") {
    ZonalFunction u = space.constant(level);
    if (space.degree() >= 2) u.coeffs(2) = 0.3 * level;
    return u;
  }
  if (cfg.init.rfind("bubble:", 0) == 0) {
    double lambda = 0.0;
    try {
      lambda = std::stod(cfg.init.substr(7));
    } catch (const std::logic_error&) {
      bad_field("init", "expected bubble:<lambda>");
    }
    if (!(lambda > 0.0)) bad_field("init", "bubble lambda must be > 0");
    ZonalFunction v = bubble_on_sphere({lambda, space.params}, *space.basis).v;
    // beta v_lambda solves P u = a u^p exactly when beta^{p-1} = Lambda_0 / (a v_1^{p-1})
    if (f.terms().size() == 1 && f.terms()[0].p > 1.0 && f.terms()[0].a > 0.0) {
      const double p = f.terms()[0].p;
      const double v1 = std::pow(2.0, space.params.m - space.params.half_n());
      v.coeffs *= std::pow(space.spectrum.lambda(0) / (f.terms()[0].a * std::pow(v1, p - 1.0)),
                           1.0 / (p - 1.0));
    }
    return v;
  }
  bad_field("init", "expected constant, perturbed or bubble:<lambda>, got '" + cfg.init + "'");
}

Report cmd_solve(const RunConfig& cfg) {
  const SphereParams P = params_of(cfg);
  const Nonlinearity f = nonlinearity_of(cfg, P, true);
  const int K = pick(cfg.K, 32);
  check_truncation(K, cfg.Q);
  const double tol = pick(cfg.tol, 1e-12);
  const SpectralSpace space = SpectralSpace::make(P, K, cfg.Q);
  const ZonalFunction init = initial_guess(cfg, space, f);

  Report r;
  r.inputs = params_json(P);
  r.inputs["f"] = f.to_string();
  r.inputs["init"] = cfg.init;
  r.tolerances = {{"residual", tol}, {"constant_distance", kConstantDistanceThreshold}};
  const SolveResult res = solve_newton(space, f, init, tol);
  r.results = to_json(res);
  r.results["growth"] = to_string(f.classify(P));
  if (const auto c = constant_solution(P, f)) r.results["constant_solution"] = *c;
  r.table = to_csv_table(pullback_to_plane(res.solution, *space.basis, graded_radial_grid(50.0, 401)));
  r.checks.push_back({"converged", res.converged, res.residual,
                      tol * std::max(1.0, (space.spectrum.lambda.array() * res.solution.coeffs.array())
                                              .matrix()
                                              .norm())});
  return r;
}

constexpr double kConstantMatchTol = 1e-8;

Report cmd_probe(const RunConfig& cfg) {
  const SphereParams P = params_of(cfg);
  const Nonlinearity f = nonlinearity_of(cfg, P, true);
  if (f.classify(P) != Growth::subcritical) bad_field("f", "probe needs a subcritical nonlinearity");
  const int K = pick(cfg.K, 32);
  check_truncation(K, cfg.Q);
  const int trials = pick(cfg.starts, 50);
  if (trials < 1) bad_field("starts", "must be >= 1");
  const double tol = pick(cfg.tol, 1e-12);
  const SpectralSpace space = SpectralSpace::make(P, K, cfg.Q);

  Report r;
  r.inputs = params_json(P);
  r.inputs["f"] = f.to_string();
  r.inputs["trials"] = trials;
  r.tolerances = {{"residual", tol}, {"constant_match", kConstantMatchTol}};
  const ProbeReport rep = uniqueness_probe(space, f, trials, cfg.seed, tol);
  r.results = to_json(rep);
  r.table.header = {"trial", "converged", "classification", "nonnegative", "trivial",
                    "mean_value", "constant_error", "residual", "iters"};
  for (const ProbeOutcome& o : rep.outcomes) {
    r.table.rows.push_back({std::to_string(o.trial), o.result.converged ? "1" : "0",
                            to_string(o.result.classification), o.nonnegative ? "1" : "0",
                            o.trivial ? "1" : "0", format_number(o.result.mean_value),
                            format_number(o.constant_error), format_number(o.result.residual),
                            std::to_string(o.result.iters)});
  }
  if (!rep.linear) {
    r.checks.push_back({"counterexamples", rep.counterexamples.empty(),
                        static_cast<double>(rep.counterexamples.size()), 0.0});
    r.checks.push_back({"constant_error", rep.worst_constant_error <= kConstantMatchTol,
                        rep.worst_constant_error, kConstantMatchTol});
  }
  return r;
}

Report cmd_verify(const RunConfig& cfg) {
  const SphereParams P = params_of(cfg);
  const int K = pick(cfg.K, 32);
  check_truncation(K, cfg.Q);
  const int starts = pick(cfg.starts, 8);
  const double p = single_double(cfg.p, "p").value_or(default_sobolev_exponent(P));
  const OptimizerConfig oc = optimizer_config(P, p, cfg, K, starts);
  const Nonlinearity f = cfg.f.empty()
                             ? Nonlinearity::power(0.5 * (1.0 + P.critical_lane_emden_exponent()))
                             : nonlinearity_of(cfg, P, true);
  if (f.classify(P) != Growth::subcritical) bad_field("f", "verify needs a subcritical nonlinearity");

  Report r;
  r.inputs = params_json(P);
  r.inputs["p"] = p;
  r.inputs["f"] = f.to_string();
  r.inputs["starts"] = starts;
  const SpectralSpace space = SpectralSpace::make(P, K, cfg.Q);
  const ZonalBasis& B = *space.basis;
  Json details;

  const double ode = laplace_beltrami_ode_residual(B);
  r.checks.push_back({"laplace_beltrami_ode", ode <= 1e-8, ode, 1e-8, true});

  const KernelSpectrum kernel = funk_hecke_spectrum(P, K);
  const GreenConstants gc = green_constant(kernel, space.spectrum, std::numeric_limits<double>::infinity());
  r.checks.push_back({"green_identity", gc.max_identity_error <= 1e-8, gc.max_identity_error, 1e-8, true});

  {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      ZonalFunction u = space.constant(1.0);
      for (int k = 1; k <= K; ++k) u.coeffs(k) += normal(rng) / (1.0 + k * k);
      const Eigen::VectorXd g = rayleigh_gradient(u, p, space);
      Eigen::VectorXd fd(g.size());
      constexpr double h = 1e-5;
      for (int k = 0; k <= K; ++k) {
        ZonalFunction a = u, b = u;
        a.coeffs(k) += h;
        b.coeffs(k) -= h;
        fd(k) = (rayleigh_quotient(a, p, space) - rayleigh_quotient(b, p, space)) / (2.0 * h);
      }
      worst = std::max(worst, (fd - g).norm() / g.norm());
    }
    r.checks.push_back({"gradient_finite_difference", worst <= 1e-6, worst, 1e-6});
  }

  const MinimizationResult mr = minimize(oc);
  const double rel = std::abs(mr.value - mr.sharp_constant) / mr.sharp_constant;
  r.checks.push_back({"sharp_constant_relative_error", rel <= kValueTol, rel, kValueTol});
  r.checks.push_back({"minimizer_distance_to_constant", mr.distance_to_constant <= kDistanceTol,
                      mr.distance_to_constant, kDistanceTol});
  details["sharp_constant"] = mr.sharp_constant;
  details["minimized_value"] = mr.value;

  const DualRatioResult dual = hls_dual_ratio(space, kernel, p, std::max(2, starts / 2), cfg.seed);
  const double duality = std::abs(dual.maximum * mr.sharp_constant - 1.0);
  r.checks.push_back({"duality_product", duality <= 1e-4, duality, 1e-4});
  details["dual_ratio"] = dual.maximum;

  {
    const double q = P.critical_sobolev_exponent();
    const double ref = lp_norm(bubble_on_sphere({1.0, P}, B).v, q, B);
    double worst = 0.0;
    for (double lambda : {0.5, 2.0}) {
      const BubbleExpansion e = bubble_on_sphere({lambda, P}, B);
      worst = std::max(worst, std::abs(lp_norm(e.v, q, B) - ref) / ref);
    }
    r.checks.push_back({"bubble_critical_norm_invariance", worst <= 1e-6, worst, 1e-6});
    const TransportCheck tc = norm_transport_check(space.constant(1.0), q, B);
    r.checks.push_back({"norm_transport", tc.discrepancy <= 1e-8, tc.discrepancy, 1e-8});
  }

  const ProbeReport probe = uniqueness_probe(space, f, starts, cfg.seed);
  r.checks.push_back({"probe_counterexamples", probe.counterexamples.empty(),
                      static_cast<double>(probe.counterexamples.size()), 0.0});
  r.checks.push_back({"probe_constant_error", probe.worst_constant_error <= kConstantMatchTol,
                      probe.worst_constant_error, kConstantMatchTol});
  details["probe_matched_constant"] = probe.matched_constant;

  {
    const auto grid = graded_radial_grid(50.0, 500);
    double mono = -std::numeric_limits<double>::infinity();
    double superpoly = 0.0;
    bool mono_ok = true, super_ok = true;
    for (const ProbeOutcome& o : probe.outcomes) {
      if (!o.nonnegative || o.trivial) continue;
      const MonotonicityReport m = verify_symmetry_monotonicity(o.result.solution, B, grid);
      mono_ok = mono_ok && m.pass;
      mono = std::max(mono, m.worst_violation);
      const SuperPolyharmonicReport s = verify_super_polyharmonic(o.result.solution);
      super_ok = super_ok && s.pass;
      for (std::size_t i = 0; i < s.min_values.size(); ++i)
        superpoly = std::min(superpoly, s.min_values[i] / std::max(s.scales[i], 1e-300));
    }
    r.checks.push_back({"symmetry_monotonicity", mono_ok, mono, kMonotonicitySlack});
    r.checks.push_back({"super_polyharmonic", super_ok, std::max(0.0, -superpoly), 1e-6});

    RadialProfile wave{P, grid, {}};
    for (double x : grid) wave.values.push_back(std::sin(x) + 2.0);
    // controls report 1 when the verifier wrongly accepts them
    const bool control_mono = !verify_monotonicity(wave).pass;
    r.checks.push_back({"negative_control_monotonicity", control_mono, control_mono ? 0.0 : 1.0, 0.0});
    if (P.m >= 2) {
      RadialProfile gauss{P, graded_radial_grid(6.0, 3000), {}};
      for (double x : gauss.grid) gauss.values.push_back(std::exp(-x * x));
      const bool control_super = !verify_super_polyharmonic(gauss, P.m).pass;
      r.checks.push_back({"negative_control_super_polyharmonic", control_super,
                          control_super ? 0.0 : 1.0, 0.0});
    }
  }

  r.tolerances = Json::object();
  for (const Check& c : r.checks) r.tolerances[c.name] = c.threshold;
  r.results = std::move(details);
  r.table.header = {"check", "pass", "value", "threshold", "margin"};
  for (const Check& c : r.checks)
    r.table.rows.push_back({c.name, c.pass ? "1" : "0", format_number(c.value),
                            format_number(c.threshold), format_number(c.threshold - c.value)});
  return r;
}

Report cmd_sweep(const RunConfig& cfg) {
  const std::vector<int> ms = parse_int_list(cfg.m, "m");
  const std::vector<int> ns = parse_int_list(cfg.n, "n");
  const std::vector<double> ps = parse_grid(cfg.p, "p");
  const int K = pick(cfg.K, 16);
  check_truncation(K, cfg.Q);
  const int starts = pick(cfg.starts, 4);
  if (starts < 1) bad_field("starts", "must be >= 1");

  // Validate the whole grid before computing anything.
  struct Point {
    SphereParams P;
    double p;
  };
  std::vector<Point> points;
  Json skipped = Json::array();
  for (int m : ms) {
    for (int n : ns) {
      if (!(m >= 1 && n >= 3 && n > 2 * m)) {
        skipped.push_back({{"m", m}, {"n", n}, {"reason", "need m >= 1, n >= 3, n > 2m"}});
        continue;
      }
      const SphereParams P = SphereParams::make(n, m);
      for (double p : ps) {
        if (p > 2.0 + 1e-3 && p < P.critical_sobolev_exponent()) {
          points.push_back({P, p});
        } else {
          skipped.push_back({{"m", m}, {"n", n}, {"p", p}, {"reason", "p outside (2, 2n/(n-2m))"}});
        }
      }
    }
  }
  std::vector<OptimizerConfig> configs;
  for (const Point& pt : points) configs.push_back(optimizer_config(pt.P, pt.p, cfg, K, starts));

  Report r;
  r.inputs = {{"m", ms}, {"n", ns}, {"p", ps}, {"starts", starts}};
  r.tolerances = {{"tol_grad", pick(cfg.tol, 1e-10)}, {"relative_error", kValueTol},
                  {"distance_to_constant", kDistanceTol}};
  r.table.header = {"m", "n", "p", "sharp_constant", "value", "relative_error",
                    "distance_to_constant", "converged"};
  Json rows = Json::array();
  double worst_rel = 0.0, worst_dist = 0.0;
  for (const OptimizerConfig& oc : configs) {
    const MinimizationResult res = minimize(oc);
    const double rel = std::abs(res.value - res.sharp_constant) / res.sharp_constant;
    worst_rel = std::max(worst_rel, rel);
    worst_dist = std::max(worst_dist, res.distance_to_constant);
    rows.push_back({{"m", oc.params.m},
                    {"n", oc.params.n},
                    {"p", oc.p},
                    {"sharp_constant", res.sharp_constant},
                    {"value", res.value},
                    {"relative_error", rel},
                    {"distance_to_constant", res.distance_to_constant},
                    {"converged", res.converged}});
    CsvRow row{std::to_string(oc.params.m), std::to_string(oc.params.n)};
    for (double x : {oc.p, res.sharp_constant, res.value, rel, res.distance_to_constant})
      row.push_back(format_number(x));
    row.push_back(res.converged ? "1" : "0");
    r.table.rows.push_back(std::move(row));
  }
  r.results = {{"rows", std::move(rows)}, {"skipped", std::move(skipped)}};
  r.checks.push_back({"relative_error", worst_rel <= kValueTol, worst_rel, kValueTol});
  r.checks.push_back({"distance_to_constant", worst_dist <= kDistanceTol, worst_dist, kDistanceTol});
  return r;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text, const std::string& field) {
  std::vector<double> out;
  if (text.find_first_not_of(" \t") == std::string::npos) return out;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(s, &used);
    } catch (const std::logic_error&) {
      bad_field(field, "malformed number '" + s + "'");
    }
    if (s.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(x))
      bad_field(field, "malformed number '" + s + "'");
    return x;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) bad_field(field, "range must be lo:hi:count");
    const double lo = number(parts[0]), hi = number(parts[1]), count = number(parts[2]);
    if (count != std::floor(count) || count < 0 || count > 1e6) bad_field(field, "range count must be a non-negative integer");
    const int c = static_cast<int>(count);
    for (int i = 0; i < c; ++i) out.push_back(c == 1 ? lo : lo + (hi - lo) * i / (c - 1));
    return out;
  }
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(number(item));
  return out;
}

int Report::exit_code() const {
  bool numerical = false, inconsistent = false;
  for (const Check& c : checks) {
    if (c.pass) continue;
    (c.consistency ? inconsistent : numerical) = true;
  }
  if (inconsistent) return kExitInconsistent;
  return numerical ? kExitNumerical : kExitPass;
}

Json Report::to_json() const {
  Json j;
  j["command"] = command;
  j["inputs"] = inputs;
  j["tolerances"] = tolerances;
  j["results"] = results;
  Json cs = Json::array();
  Json failures = Json::array();
  for (const Check& c : checks) {
    cs.push_back({{"name", c.name},
                  {"pass", c.pass},
                  {"value", c.value},
                  {"threshold", c.threshold},
                  {"margin", c.threshold - c.value}});
    if (!c.pass) failures.push_back(c.name);
  }
  j["checks"] = std::move(cs);
  j["failures"] = std::move(failures);
  j["status"] = exit_code() == kExitPass ? "pass" : "fail";
  j["exit_code"] = exit_code();
  Json prov = provenance;
  prov["wall_time_s"] = wall_time;
  j["provenance"] = std::move(prov);
  return j;
}

Report execute(const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "csv") bad_field("format", "expected json or csv");
  const auto start = std::chrono::steady_clock::now();
  Report r;
  if (cfg.command == "eigenvalues") {
    r = cmd_eigenvalues(cfg);
  } else if (cfg.command == "sharp-constant") {
    r = cmd_sharp_constant(cfg);
  } else if (cfg.command == "minimize") {
    r = cmd_minimize(cfg);
  } else if (cfg.command == "solve") {
    r = cmd_solve(cfg);
  } else if (cfg.command == "probe") {
    r = cmd_probe(cfg);
  } else if (cfg.command == "verify") {
    r = cmd_verify(cfg);
  } else if (cfg.command == "sweep") {
    r = cmd_sweep(cfg);
  } else {
    throw DomainError("unknown command '" + cfg.command + "'");
  }
  r.command = cfg.command;
  const int K = r.inputs.contains("K") ? r.inputs["K"].get<int>() : cfg.K;
  r.provenance = {{"version", std::string(version())}, {"seed", cfg.seed}, {"K", nullptr}, {"Q", nullptr}};
  if (K >= 0) {
    r.provenance["K"] = K;
    r.provenance["Q"] = cfg.Q >= 0 ? cfg.Q : default_quadrature_order(K);
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral toolkit for GJMS operators on round spheres", "sgjms"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));
  RunConfig cfg;
  // Lists such as "2.2,2.5" arrive split when they come from a config file.
  auto list_option = [&](const std::string& name, std::string& target, const std::string& help) {
    return app.add_option(name, target, help)
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  };
  list_option("--m", cfg.m, "GJMS order parameter m (list for sweep)")->capture_default_str();
  list_option("--n", cfg.n, "sphere dimension n (list for sweep)")->capture_default_str();
  list_option("--p", cfg.p, "exponent, list a,b,c or range lo:hi:count");
  list_option("--f", cfg.f, "nonlinearity a1:p1,a2:p2");
  app.add_option("--init", cfg.init, "solve start: constant | perturbed | bubble:<lambda>")
      ->capture_default_str();
  app.add_option("--K", cfg.K, "zonal truncation degree");
  app.add_option("--Q", cfg.Q, "quadrature nodes (default 2K+8)");
  app.add_option("--starts", cfg.starts, "multistart count / probe trials");
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--tol", cfg.tol, "command tolerance");
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--format", cfg.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"eigenvalues", "k, Lambda_k, mu_k and g*mu_k*Lambda_k"},
      {"sharp-constant", "closed-form sharp constant over a p grid"},
      {"minimize", "multistart minimization of the Rayleigh quotient"},
      {"solve", "Newton solve of P_m u = f(u)"},
      {"probe", "uniqueness probe from seeded positive starts"},
      {"verify", "invariant suite with per-check margins"},
      {"sweep", "minimization over an (m, n, p) grid"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  Report report;
  try {
    report = execute(cfg);
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MismatchError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InconsistencyError& e) {
    err << "inconsistency: " << e.what() << "\n";
    return kExitInconsistent;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary);
    if (!file) {
      err << "usage error: --out: cannot open '" << cfg.out << "'\n";
      return kExitUsage;
    }
    sink = &file;
  }
  if (cfg.format == "csv") {
    write_csv(*sink, report.table);
  } else {
    *sink << report.to_json().dump(2) << "\n";
  }
  for (const Check& c : report.checks) {
    if (!c.pass)
      err << "FAIL " << c.name << " value=" << format_number(c.value)
          << " threshold=" << format_number(c.threshold) << "\n";
  }
  return report.exit_code();
}

}  // namespace sgjms::cli

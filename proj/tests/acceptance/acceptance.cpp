// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "sgjms/conformal_geometry.hpp"
#include "sgjms/integral_kernels.hpp"
#include "sgjms/lane_emden.hpp"
#include "sgjms/quadrature.hpp"
#include "sgjms/rayleigh_optimizer.hpp"
#include "sgjms/serialization.hpp"

using namespace sgjms;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Triple {
  int m, n;
  double p;
};

const Triple kSharpGrid[] = {{1, 3, 4.0}, {1, 4, 3.0}, {2, 5, 2.5}, {3, 7, 2.25}};

// 1. minimize() reproduces the closed-form constant at the constant function.
Verdict sharp_constant_reproduction() {
  Verdict v;
  const auto t0 = Clock::now();
  double worst_rel = 0.0, worst_dist = 0.0;
  int starts_ok = 0, starts_total = 0;
  for (const Triple& c : kSharpGrid) {
    OptimizerConfig cfg;
    cfg.params = SphereParams::make(c.n, c.m);
    cfg.p = c.p;
    cfg.K = 32;
    cfg.starts = 20;
    const MinimizationResult r = minimize(cfg);
    const double S = sharp_constant(c.m, c.n, c.p);
    const double rel = std::abs(r.value - S) / S;
    worst_rel = std::max(worst_rel, rel);
    worst_dist = std::max(worst_dist, r.distance_to_constant);
    v.pass = v.pass && r.converged && rel <= 1e-6 && r.distance_to_constant <= 1e-5;
    for (const StartSummary& s : r.starts) {
      ++starts_total;
      if (s.converged && std::abs(s.value - S) / S <= 1e-6 && s.distance_to_constant <= 1e-5)
        ++starts_ok;
    }
  }
  const double elapsed = seconds_since(t0);
  v.pass = v.pass && elapsed <= 60.0;
  v.detail = "max rel err " + fmt("%.2e", worst_rel) + ", max distance " + fmt("%.2e", worst_dist) +
             ", " + std::to_string(starts_ok) + "/" + std::to_string(starts_total) +
             " starts reach the constant, " + fmt("%.1f s", elapsed);
  return v;
}

// 2. The m = 1 constant is n(n-2)/4 |S^n|^{1-2/p}.
Verdict conformal_laplacian_reduction() {
  Verdict v;
  double worst = 0.0;
  for (int n = 3; n <= 8; ++n) {
    const double crit = 2.0 * n / (n - 2.0);
    for (int i = 0; i < 10; ++i) {
      const double p = 2.0 + (crit - 2.0) * i / 9.0;
      const double expect = n * (n - 2) / 4.0 * std::pow(sphere_area(n), 1.0 - 2.0 / p);
      worst = std::max(worst, std::abs(sharp_constant(1, n, p) - expect) / expect);
    }
  }
  v.pass = worst <= 1e-14;
  v.detail = "max rel diff " + fmt("%.2e", worst) + " over n=3..8, 10 exponents each";
  return v;
}

// 3. g_mn mu_k Lambda_k = 1.
Verdict green_identity() {
  Verdict v;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (auto [m, n] : {std::pair{1, 3}, {1, 5}, {2, 5}, {3, 7}}) {
    const SphereParams P = SphereParams::make(n, m);
    const GreenConstants gc = green_constant(funk_hecke_spectrum(P, 32), gjms_eigenvalues(P, 32),
                                             std::numeric_limits<double>::infinity());
    worst = std::max(worst, gc.max_identity_error);
  }
  const double elapsed = seconds_since(t0);
  v.pass = worst <= 1e-8 && elapsed <= 10.0;
  v.detail = "max |g mu Lambda - 1| " + fmt("%.2e", worst) + " for k<=32, " + fmt("%.2f s", elapsed);
  return v;
}

// 4. Analytic gradient against central differences.
Verdict gradient_check() {
  Verdict v;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (const Triple& c : kSharpGrid) {
    const SpectralSpace sp = SpectralSpace::make(SphereParams::make(c.n, c.m), 32);
    for (int trial = 0; trial < 100; ++trial) {
      ZonalFunction u = sp.constant(1.0);
      for (int k = 1; k <= sp.degree(); ++k) u.coeffs(k) += normal(rng) / (1.0 + k);
      const Eigen::VectorXd g = rayleigh_gradient(u, c.p, sp);
      Eigen::VectorXd fd(g.size());
      const double h = 1e-5;
      for (Eigen::Index k = 0; k < g.size(); ++k) {
        ZonalFunction a = u, b = u;
        a.coeffs(k) += h;
        b.coeffs(k) -= h;
        fd(k) = (rayleigh_quotient(a, c.p, sp) - rayleigh_quotient(b, c.p, sp)) / (2.0 * h);
      }
      worst = std::max(worst, (fd - g).norm() / g.norm());
    }
  }
  v.pass = worst <= 1e-6;
  v.detail = "max relative error " + fmt("%.2e", worst) + " over 4 x 100 points";
  return v;
}

struct ProbeCase {
  int m, n;
  std::string f;
};

const ProbeCase kProbeCases[] = {{1, 3, "1:3"}, {2, 5, "1:2"}, {2, 5, "1:1,1:2"}};

std::vector<std::pair<SpectralSpace, ProbeReport>>& probe_runs() {
  static std::vector<std::pair<SpectralSpace, ProbeReport>> runs;
  return runs;
}

// 5. Every converged nonnegative outcome is the constant solution.
Verdict uniqueness_probes() {
  Verdict v;
  const auto t0 = Clock::now();
  std::ostringstream detail;
  for (const ProbeCase& c : kProbeCases) {
    const SpectralSpace sp = SpectralSpace::make(SphereParams::make(c.n, c.m), 32);
    const Nonlinearity f = Nonlinearity::parse(c.f);
    const ProbeReport rep = uniqueness_probe(sp, f, 50, 1);
    const int nontrivial = rep.nonnegative - rep.trivial;
    v.pass = v.pass && rep.counterexamples.empty() && rep.worst_constant_error <= 1e-8 &&
             rep.matched_constant == nontrivial && nontrivial > 0;
    detail << "(" << c.m << "," << c.n << ",f=" << f.to_string() << ") " << rep.matched_constant << "/"
           << nontrivial << " matched, err " << fmt("%.1e", rep.worst_constant_error) << "; ";
    probe_runs().emplace_back(sp, rep);
  }
  const double elapsed = seconds_since(t0);
  v.pass = v.pass && elapsed <= 120.0;
  detail << "0 counterexamples required, " << fmt("%.1f s", elapsed);
  v.detail = detail.str();
  return v;
}

// 6. Critical exponent admits bubbles; subcritical exponents do not.
Verdict critical_contrast() {
  Verdict v;
  const SphereParams P = SphereParams::make(3, 1);
  std::ostringstream detail;

  {
    const SpectralSpace sp = SpectralSpace::make(P, 64);
    const double p = P.critical_lane_emden_exponent();
    const Nonlinearity f = Nonlinearity::power(p);
    ZonalFunction init = bubble_on_sphere({2.0, P}, *sp.basis).v;
    const double v1 = std::pow(2.0, P.m - P.half_n());
    init.coeffs *= std::pow(sp.spectrum.lambda(0) / std::pow(v1, p - 1.0), 1.0 / (p - 1.0));
    const SolveResult r = solve_newton(sp, f, init);
    const bool ok = r.converged && r.residual <= 1e-8 && r.classification == SolutionKind::nonconstant;
    v.pass = v.pass && ok;
    detail << "bubble solve residual " << fmt("%.1e", r.residual) << " (" << to_string(r.classification)
           << ", distance " << fmt("%.3f", r.distance_to_constant) << "); ";
  }

  const SpectralSpace big = SpectralSpace::make(P, 256);
  const double crit = P.critical_sobolev_exponent();
  std::vector<double> q;
  for (double lambda : {0.5, 1.0, 2.0})
    q.push_back(rayleigh_quotient(bubble_on_sphere({lambda, P}, *big.basis).v, crit, big));
  const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
  const double spread = (*hi - *lo) / *lo;
  v.pass = v.pass && spread <= 1e-4;
  detail << "critical quotient spread " << fmt("%.1e", spread) << " at K=256; ";

  const SpectralSpace sp = SpectralSpace::make(P, 64);
  const double margin = rayleigh_quotient(bubble_on_sphere({2.0, P}, *sp.basis).v, 4.0, sp) -
                        rayleigh_quotient(sp.constant(1.0), 4.0, sp);
  v.pass = v.pass && margin > 0.0;
  detail << "p=4 bubble excess " << fmt("%.4e", margin);
  v.detail = detail.str();
  return v;
}

// 7. Verifiers accept the probe solutions and reject the synthetic violators.
Verdict verifiers() {
  Verdict v;
  int checked = 0;
  double worst_mono = -std::numeric_limits<double>::infinity();
  const auto grid = graded_radial_grid(50.0, 500);
  for (const auto& [sp, rep] : probe_runs()) {
    for (const ProbeOutcome& o : rep.outcomes) {
      if (!o.result.converged || !o.nonnegative || o.trivial) continue;
      const MonotonicityReport mono = verify_symmetry_monotonicity(o.result.solution, *sp.basis, grid);
      const SuperPolyharmonicReport sup = verify_super_polyharmonic(o.result.solution);
      v.pass = v.pass && mono.pass && sup.pass;
      worst_mono = std::max(worst_mono, mono.worst_violation);
      ++checked;
    }
  }
  v.pass = v.pass && checked > 0;

  const SphereParams P = SphereParams::make(5, 2);
  RadialProfile wave{P, grid, {}};
  for (double r : grid) wave.values.push_back(std::sin(r) + 2.0);
  const bool wave_rejected = !verify_monotonicity(wave).pass;
  RadialProfile gauss{P, graded_radial_grid(6.0, 3000), {}};
  for (double r : gauss.grid) gauss.values.push_back(std::exp(-r * r));
  const bool gauss_rejected = !verify_super_polyharmonic(gauss, 2).pass;
  v.pass = v.pass && wave_rejected && gauss_rejected;
  v.detail = std::to_string(checked) + " solutions pass (worst increment " + fmt("%.1e", worst_mono) +
             "); sin(r)+2 " + (wave_rejected ? "rejected" : "ACCEPTED") + ", exp(-r^2) " +
             (gauss_rejected ? "rejected" : "ACCEPTED");
  return v;
}

// 8. The dual ratio maximum is the reciprocal of the sharp constant.
Verdict duality() {
  Verdict v;
  const SphereParams P = SphereParams::make(3, 1);
  const SpectralSpace sp = SpectralSpace::make(P, 32);
  const DualRatioResult d = hls_dual_ratio(sp, funk_hecke_spectrum(P, 32), 4.0, 8, 1);
  const double prod = d.maximum * sharp_constant(1, 3, 4.0);
  v.pass = std::abs(prod - 1.0) <= 1e-4;
  v.detail = "product " + fmt("%.12f", prod);
  return v;
}

// 9. Identical seeds give identical reports.
Verdict determinism() {
  Verdict v;
  const std::vector<std::vector<std::string>> commands{
      {"minimize", "--m", "2", "--n", "5", "--p", "2.5", "--K", "16", "--starts", "6", "--seed", "7"},
      {"probe", "--m", "1", "--n", "3", "--p", "3", "--K", "16", "--starts", "10", "--seed", "7"},
      {"solve", "--m", "1", "--n", "3", "--p", "5", "--init", "bubble:2", "--K", "32"},
      {"verify", "--m", "1", "--n", "3", "--K", "16", "--starts", "4", "--seed", "7"}};
  int identical = 0;
  for (const auto& args : commands) {
    std::string runs[2];
    for (std::string& text : runs) {
      std::vector<const char*> argv{"sgjms"};
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
      Json j = Json::parse(out.str());
      j["provenance"].erase("wall_time_s");
      text = j.dump();
    }
    if (runs[0] == runs[1]) ++identical;
  }
  v.pass = identical == static_cast<int>(commands.size());
  v.detail = std::to_string(identical) + "/" + std::to_string(commands.size()) +
             " commands produce identical JSON";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"sharp constant reproduction", sharp_constant_reproduction},
      {"m=1 reduction", conformal_laplacian_reduction},
      {"Green spectral identity", green_identity},
      {"gradient vs finite differences", gradient_check},
      {"uniqueness probe", uniqueness_probes},
      {"critical contrast", critical_contrast},
      {"symmetry and super-polyharmonic verifiers", verifiers},
      {"duality", duality},
      {"determinism", determinism}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

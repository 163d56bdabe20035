#include "sgjms/rayleigh_optimizer.hpp"

#include <cmath>
#include <random>

#include "sgjms/conformal_geometry.hpp"
#include "sgjms/errors.hpp"
#include "sgjms/parallel.hpp"

namespace sgjms {

namespace {

constexpr double kMinExponentGap = 1e-3;

struct QuotientParts {
  double value;
  double form;
  double integral;  // int |u|^p
};

QuotientParts quotient_parts(const Eigen::VectorXd& c, const Eigen::VectorXd& u_nodal, double p,
                             const SpectralSpace& space) {
  const Eigen::VectorXd& lambda = space.spectrum.lambda;
  const double form = (lambda.head(c.size()).array() * c.array().square()).sum();
  const double integral = space.basis->integrate(u_nodal.array().abs().pow(p).matrix());
  return {form / std::pow(integral, 2.0 / p), form, integral};
}

Eigen::VectorXd gradient_from_parts(const Eigen::VectorXd& c, const Eigen::VectorXd& u_nodal,
                                    double p, const QuotientParts& parts,
                                    const SpectralSpace& space) {
  const Eigen::VectorXd dual = space.basis->analyze_coeffs(
      (u_nodal.array().sign() * u_nodal.array().abs().pow(p - 1.0)).matrix());
  const double norm = std::pow(parts.integral, 1.0 / p);
  return 2.0 * (space.spectrum.lambda.head(c.size()).array() * c.array()).matrix() / (norm * norm) -
         2.0 * parts.form * std::pow(norm, -p - 2.0) * dual.head(c.size());
}

void check_function(const ZonalFunction& u, const SpectralSpace& space, const char* where) {
  if (!(u.params == space.params)) throw MismatchError(std::string(where) + ": params mismatch");
  if (u.degree() > space.degree()) throw MismatchError(std::string(where) + ": truncation mismatch");
  if (!u.coeffs.allFinite()) throw DomainError(std::string(where) + ": non-finite coefficients");
  if (u.coeffs.squaredNorm() == 0.0) throw DomainError(std::string(where) + ": zero function");
}

Eigen::VectorXd padded(const ZonalFunction& u, int K) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(K + 1);
  c.head(u.coeffs.size()) = u.coeffs;
  return c;
}

}  // namespace

double sharp_constant(int m, int n, double p) {
  const SphereParams P = SphereParams::make(n, m);
  if (!(p >= 2.0 && p <= P.critical_sobolev_exponent()))
    throw DomainError("sharp_constant: p must lie in [2, 2n/(n-2m)]");
  const double lambda0 = gjms_eigenvalues(P, 0).lambda(0);
  return lambda0 * std::pow(sphere_area(n), 1.0 - 2.0 / p);
}

double rayleigh_quotient(const ZonalFunction& u, double p, const SpectralSpace& space) {
  if (!(p >= 1.0)) throw DomainError("rayleigh_quotient: p must be >= 1");
  check_function(u, space, "rayleigh_quotient");
  return quotient_parts(u.coeffs, space.basis->synthesize(u.coeffs), p, space).value;
}

Eigen::VectorXd rayleigh_gradient(const ZonalFunction& u, double p, const SpectralSpace& space) {
  if (!(p > 2.0)) throw DomainError("rayleigh_gradient: p must be > 2");
  check_function(u, space, "rayleigh_gradient");
  const Eigen::VectorXd nodal = space.basis->synthesize(u.coeffs);
  return gradient_from_parts(u.coeffs, nodal, p, quotient_parts(u.coeffs, nodal, p, space), space);
}

void OptimizerConfig::validate() const {
  const SphereParams P = SphereParams::make(params.n, params.m);
  if (!(p > 2.0 + kMinExponentGap && p < P.critical_sobolev_exponent()))
    throw DomainError("OptimizerConfig: need 2 + 1e-3 < p < 2n/(n-2m), got p=" + std::to_string(p));
  if (K < 1) throw DomainError("OptimizerConfig: K must be >= 1");
  if (Q >= 0 && Q <= K) throw DomainError("OptimizerConfig: Q must exceed K");
  if (starts < 1) throw DomainError("OptimizerConfig: starts must be >= 1");
  if (!(tol_grad > 0.0)) throw DomainError("OptimizerConfig: tol_grad must be > 0");
  if (!(step0 > 0.0)) throw DomainError("OptimizerConfig: step0 must be > 0");
  if (max_iter < 0) throw DomainError("OptimizerConfig: max_iter must be >= 0");
}

namespace {

detail::DescentOutcome run_descent(const OptimizerConfig& cfg, const SpectralSpace& space,
                                   const Eigen::VectorXd& start, bool keep_trace) {
  const double p = cfg.p;
  auto objective = [&](const Eigen::VectorXd& c, Eigen::VectorXd* grad) {
    const Eigen::VectorXd nodal = space.basis->synthesize(c);
    const QuotientParts parts = quotient_parts(c, nodal, p, space);
    if (grad) *grad = gradient_from_parts(c, nodal, p, parts, space);
    return parts.value;
  };
  auto normalize = [&](const Eigen::VectorXd& c) -> Eigen::VectorXd {
    return c / lp_norm_nodal(space.basis->synthesize(c), p, *space.basis);
  };
  detail::DescentSettings s;
  s.step0 = cfg.step0;
  s.tol_grad = cfg.tol_grad;
  s.max_iter = cfg.max_iter;
  s.keep_trace = keep_trace;
  const Eigen::VectorXd precond = space.spectrum.lambda.cwiseInverse();
  return detail::projected_descent(start, precond, s, objective, normalize);
}

StartSummary summarize(int index, std::string kind, const detail::DescentOutcome& d,
                       const SphereParams& params) {
  return StartSummary{index,       std::move(kind), d.value, d.grad_norm, d.iters, d.converged,
                      ZonalFunction{params, d.x}.distance_to_constant()};
}

MinimizationResult assemble(const OptimizerConfig& cfg, const SpectralSpace& space,
                            std::vector<detail::DescentOutcome>& runs,
                            std::vector<StartSummary> summaries) {
  MinimizationResult out;
  out.sharp_constant = sharp_constant(cfg.params.m, cfg.params.n, cfg.p);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (out.best_start < 0 || runs[i].value < out.value) {
      out.best_start = static_cast<int>(i);
      out.value = runs[i].value;
    }
  }
  detail::DescentOutcome& best = runs[out.best_start];
  out.minimizer = ZonalFunction{space.params, best.x};
  out.grad_norm = best.grad_norm;
  out.iters = best.iters;
  out.converged = best.converged;
  out.distance_to_constant = out.minimizer.distance_to_constant();
  out.trace = std::move(best.trace);
  out.starts = std::move(summaries);
  return out;
}

}  // namespace

MinimizationResult minimize_from(const OptimizerConfig& cfg, const SpectralSpace& space,
                                 const ZonalFunction& start) {
  cfg.validate();
  check_function(start, space, "minimize_from");
  std::vector<detail::DescentOutcome> runs{run_descent(cfg, space, padded(start, space.degree()), true)};
  std::vector<StartSummary> summaries{summarize(0, "user", runs[0], space.params)};
  return assemble(cfg, space, runs, std::move(summaries));
}

MinimizationResult minimize(const OptimizerConfig& cfg) {
  cfg.validate();
  const SpectralSpace space = SpectralSpace::make(cfg.params, cfg.K, cfg.Q);
  const int K = space.degree();

  std::vector<std::string> kinds;
  std::vector<Eigen::VectorXd> starts;
  if (cfg.structured_starts) {
    kinds.emplace_back("constant");
    starts.push_back(space.constant(1.0).coeffs);
    for (double lambda : {2.0, 4.0}) {
      kinds.emplace_back("bubble");
      starts.push_back(bubble_on_sphere(BubbleParams{lambda, space.params}, *space.basis).v.coeffs);
    }
  }
  for (int s = 0; s < cfg.starts; ++s) {
    std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed), static_cast<std::uint64_t>(s),
                      std::uint64_t{0x52'51}};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd c(K + 1);
    for (int k = 0; k <= K; ++k) c(k) = normal(rng) / (1.0 + static_cast<double>(k) * k);
    kinds.emplace_back("random");
    starts.push_back(std::move(c));
  }

  const int count = static_cast<int>(starts.size());
  std::vector<detail::DescentOutcome> runs(count);
  parallel_for_index(count, [&](int i) { runs[i] = run_descent(cfg, space, starts[i], true); });

  std::vector<StartSummary> summaries;
  summaries.reserve(count);
  for (int i = 0; i < count; ++i) summaries.push_back(summarize(i, kinds[i], runs[i], space.params));
  return assemble(cfg, space, runs, std::move(summaries));
}

}  // namespace sgjms

#include "sgjms/integral_kernels.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "sgjms/detail/projected_descent.hpp"
#include "sgjms/errors.hpp"
#include "sgjms/parallel.hpp"

namespace sgjms {

namespace {

Eigen::VectorXd funk_hecke_with_rule(const SphereParams& P, int K, int Q) {
  const GaussRule g = gauss_jacobi(Q, P.m - 1.0, 0.5 * (P.n - 2));
  const Eigen::VectorXd at_pole = ZonalBasis::harmonics_at(P.n, K, 1.0);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(K + 1);
  for (int i = 0; i < Q; ++i) {
    const Eigen::VectorXd y = ZonalBasis::harmonics_at(P.n, K, g.nodes[i]);
    mu += g.weights[i] * y.cwiseQuotient(at_pole);
  }
  // (2-2t)^{-(n-2m)/2} (1-t^2)^{(n-2)/2} = 2^{-(n-2m)/2} (1-t)^{m-1} (1+t)^{(n-2)/2}
  return sphere_area(P.n - 1) * std::pow(2.0, -0.5 * (P.n - 2 * P.m)) * mu;
}

}  // namespace

KernelSpectrum funk_hecke_spectrum(SphereParams params, int K, double tol) {
  params = SphereParams::make(params.n, params.m);
  if (K < 0) throw DomainError("funk_hecke_spectrum: K must be >= 0");
  int Q = K / 2 + 8;
  Eigen::VectorXd previous = funk_hecke_with_rule(params, K, Q);
  double achieved = std::numeric_limits<double>::infinity();
  for (int round = 0; round < 6; ++round) {
    Q *= 2;
    Eigen::VectorXd current = funk_hecke_with_rule(params, K, Q);
    achieved = ((current - previous).cwiseAbs().cwiseQuotient(current.cwiseAbs())).maxCoeff();
    if (achieved <= tol) return KernelSpectrum{params, std::move(current)};
    previous = std::move(current);
  }
  throw AccuracyError("funk_hecke_spectrum: relative tolerance " + std::to_string(tol) +
                          " not reached",
                      achieved);
}

GreenConstants green_constant(const KernelSpectrum& kernel, const GjmsSpectrum& spec,
                              double check_tol) {
  if (!(kernel.params == spec.params)) throw MismatchError("green_constant: params mismatch");
  if (kernel.degree() != spec.degree()) throw MismatchError("green_constant: truncation mismatch");
  const int n = spec.params.n;
  GreenConstants out;
  out.c_n = 1.0 / (n * (n - 2.0) * ball_volume(n));
  out.g_mn = 1.0 / (kernel.mu(0) * spec.lambda(0));
  for (int k = 0; k <= spec.degree(); ++k) {
    out.max_identity_error =
        std::max(out.max_identity_error, std::abs(out.g_mn * kernel.mu(k) * spec.lambda(k) - 1.0));
  }
  if (out.max_identity_error > check_tol) {
    throw InconsistencyError("green_constant: g*mu_k*Lambda_k deviates from 1 by " +
                             std::to_string(out.max_identity_error));
  }
  return out;
}

ZonalFunction green_apply(const ZonalFunction& v, const GjmsSpectrum& spec) {
  if (!(v.params == spec.params)) throw MismatchError("green_apply: params mismatch");
  if (v.degree() > spec.degree()) throw MismatchError("green_apply: truncation mismatch");
  return ZonalFunction{v.params,
                       v.coeffs.cwiseQuotient(spec.lambda.head(v.coeffs.size()))};
}

double hls_functional(const ZonalFunction& v, const KernelSpectrum& kernel) {
  if (!(v.params == kernel.params)) throw MismatchError("hls_functional: params mismatch");
  if (v.degree() > kernel.degree()) throw MismatchError("hls_functional: truncation mismatch");
  return (kernel.mu.head(v.coeffs.size()).array() * v.coeffs.array().square()).sum();
}

DualRatioResult hls_dual_ratio(const SpectralSpace& space, const KernelSpectrum& kernel, double p,
                               int trials, std::uint64_t seed, double tol_grad, int max_iter) {
  const SphereParams& P = space.params;
  if (!(p > 2.0 && p < P.critical_sobolev_exponent()))
    throw DomainError("hls_dual_ratio: need 2 < p < 2n/(n-2m)");
  if (trials < 1) throw DomainError("hls_dual_ratio: trials must be >= 1");
  const ZonalBasis& basis = *space.basis;
  const int K = basis.degree();
  if (kernel.degree() < K) throw MismatchError("hls_dual_ratio: kernel spectrum too short");
  const Eigen::VectorXd mu = kernel.mu.head(K + 1);
  const GreenConstants gc = green_constant(KernelSpectrum{kernel.params, mu}, space.spectrum);
  const double q = p / (p - 1.0);

  // Minimize the negated ratio.
  auto objective = [&](const Eigen::VectorXd& c, Eigen::VectorXd* grad) {
    const Eigen::VectorXd u = basis.synthesize(c);
    const double integral = basis.integrate(u.array().abs().pow(q).matrix());
    const double norm2 = std::pow(integral, 2.0 / q);
    const double hls = (mu.array() * c.array().square()).sum();
    const double ratio = gc.g_mn * hls / norm2;
    if (grad) {
      const Eigen::VectorXd dual =
          basis.analyze_coeffs((u.array().sign() * u.array().abs().pow(q - 1.0)).matrix());
      // d/dc ||u||_q^2 = 2 ||u||_q^{2-q} <|u|^{q-2}u, Y_k>
      const double norm_q = std::pow(integral, 1.0 / q);
      *grad = -(2.0 * gc.g_mn * (mu.array() * c.array()).matrix() / norm2 -
                2.0 * ratio * std::pow(norm_q, -q) * dual);
    }
    return -ratio;
  };
  auto normalize = [&](const Eigen::VectorXd& c) -> Eigen::VectorXd {
    const double norm = lp_norm_nodal(basis.synthesize(c), q, basis);
    return c / norm;
  };

  const ZonalFunction one = space.constant(1.0);
  DualRatioResult out;
  out.starts = trials;
  out.at_constant = -objective(one.coeffs, nullptr);

  std::vector<detail::DescentOutcome> results(trials);
  const Eigen::VectorXd precond = Eigen::VectorXd::Ones(K + 1);
  detail::DescentSettings settings;
  settings.tol_grad = tol_grad;
  settings.max_iter = max_iter;
  settings.step0 = 1.0 / (gc.g_mn * mu(0));

  parallel_for_index(trials, [&](int i) {
    Eigen::VectorXd start = one.coeffs;
    if (i > 0) {
      std::seed_seq seq{static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(i),
                        std::uint64_t{0x48'4c'53}};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> normal(0.0, 1.0);
      Eigen::VectorXd c = one.coeffs;
      for (int k = 1; k <= K; ++k) c(k) = 0.5 * one.coeffs(0) * normal(rng) / (1.0 + k * k);
      start = basis.analyze_coeffs(basis.synthesize(c).cwiseAbs());
    }
    results[i] = detail::projected_descent(start, precond, settings, objective, normalize);
  });

  for (int i = 0; i < trials; ++i) {
    if (results[i].converged) ++out.converged_starts;
    const double value = -results[i].value;
    if (out.best_start < 0 || value > out.maximum) {
      out.maximum = value;
      out.best_start = i;
    }
  }
  out.maximizer = ZonalFunction{P, results[out.best_start].x};
  return out;
}

}  // namespace sgjms

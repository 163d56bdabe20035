#ifndef SGJMS_RAYLEIGH_OPTIMIZER_HPP_
#define SGJMS_RAYLEIGH_OPTIMIZER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sgjms/detail/projected_descent.hpp"
#include "sgjms/spectral_core.hpp"

namespace sgjms {

using detail::TracePoint;

/// S_{m,n,p} = Lambda_0 |S^n|^{1-2/p}. Accepts 2 <= p <= 2n/(n-2m).
double sharp_constant(int m, int n, double p);

/// Q_m(u) / ||u||_p^2. Throws DomainError for u = 0 or p < 1.
double rayleigh_quotient(const ZonalFunction& u, double p, const SpectralSpace& space);

/// Gradient of the quotient in coefficient space:
/// 2 Lambda_k c_k / N^2 - 2 Q_m(u) N^{-p-2} <|u|^{p-2}u, Y_k>, N = ||u||_p.
Eigen::VectorXd rayleigh_gradient(const ZonalFunction& u, double p, const SpectralSpace& space);

struct OptimizerConfig {
  SphereParams params;
  double p = 4.0;
  int K = 32;
  int Q = -1;  // -1: 2K + 8
  int starts = 20;
  std::uint64_t seed = 1;
  double step0 = 0.5;
  double tol_grad = 1e-10;
  int max_iter = 5000;
  /// Adds the constant and the lambda = 2, 4 bubbles ahead of the random starts.
  bool structured_starts = true;

  /// Throws DomainError on any violated precondition.
  void validate() const;
};

struct StartSummary {
  int index = 0;
  std::string kind;  // "constant" | "bubble" | "random" | "user"
  double value = 0.0;
  double grad_norm = 0.0;
  int iters = 0;
  bool converged = false;
  double distance_to_constant = 0.0;
};

struct MinimizationResult {
  ZonalFunction minimizer;  // normalized to ||u||_p = 1
  double value = 0.0;
  /// Dual (H^{-m}) norm sqrt(sum g_k^2 / Lambda_k) of the final gradient.
  double grad_norm = 0.0;
  int iters = 0;
  double distance_to_constant = 0.0;
  bool converged = false;
  int best_start = -1;
  double sharp_constant = 0.0;
  std::vector<StartSummary> starts;
  std::vector<TracePoint> trace;  // of the best start
};

/// Best-of-multistart projected gradient descent on the L^p unit sphere.
MinimizationResult minimize(const OptimizerConfig& cfg);
/// Single run from a given start on a prebuilt space.
MinimizationResult minimize_from(const OptimizerConfig& cfg, const SpectralSpace& space,
                                 const ZonalFunction& start);

}  // namespace sgjms

#endif  // SGJMS_RAYLEIGH_OPTIMIZER_HPP_

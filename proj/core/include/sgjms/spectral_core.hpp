#ifndef SGJMS_SPECTRAL_CORE_HPP_
#define SGJMS_SPECTRAL_CORE_HPP_

#include <Eigen/Core>

#include <memory>

#include "sgjms/quadrature.hpp"

namespace sgjms {

/// Sphere dimension n and GJMS order parameter m (operator order 2m), n > 2m.
struct SphereParams {
  int n = 3;
  int m = 1;

  /// Validating constructor; throws DomainError unless m >= 1, n >= 3, n > 2m.
  static SphereParams make(int n, int m);

  double half_n() const { return 0.5 * n; }
  /// Critical Sobolev exponent 2n/(n-2m).
  double critical_sobolev_exponent() const { return 2.0 * n / (n - 2.0 * m); }
  /// Critical Lane--Emden exponent (n+2m)/(n-2m).
  double critical_lane_emden_exponent() const { return (n + 2.0 * m) / (n - 2.0 * m); }

  friend bool operator==(const SphereParams&, const SphereParams&) = default;
};

/// Rotationally symmetric function on S^n in the orthonormal zonal basis.
struct ZonalFunction {
  SphereParams params;
  Eigen::VectorXd coeffs;  // c_0 .. c_K

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  /// L^2(S^n) norm, by Parseval.
  double l2_norm() const { return coeffs.norm(); }
  /// ||u - mean(u)||_2 / ||u||_2; zero for u = 0.
  double distance_to_constant() const;
};

/// Eigenvalues of P_m on degree-k zonal harmonics.
struct GjmsSpectrum {
  SphereParams params;
  Eigen::VectorXd lambda;  // Lambda_0 .. Lambda_K

  int degree() const { return static_cast<int>(lambda.size()) - 1; }
};

/**
 * Orthonormal zonal harmonics Y_0..Y_K on S^n sampled at a quadrature rule.
 *
 * Y_k is the Gegenbauer polynomial C_k^{(n-1)/2}(t) rescaled so that
 * \f$ \int_{S^n} Y_k^2 d\sigma = 1 \f$; values come from the orthonormal
 * three-term recurrence, so no factorials appear.
 */
class ZonalBasis {
 public:
  ZonalBasis(QuadratureRule rule, SphereParams params, int K);

  const QuadratureRule& rule() const { return rule_; }
  const SphereParams& params() const { return params_; }
  int degree() const { return K_; }
  int order() const { return rule_.order(); }
  /// Q x (K+1) matrix of Y_k(t_i).
  const Eigen::MatrixXd& values() const { return values_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }

  Eigen::VectorXd synthesize(const Eigen::VectorXd& coeffs) const;
  Eigen::VectorXd synthesize(const ZonalFunction& u) const;
  ZonalFunction analyze(const Eigen::VectorXd& nodal_values) const;
  Eigen::VectorXd analyze_coeffs(const Eigen::VectorXd& nodal_values) const;
  /// \f$ \int_{S^n} f d\sigma \f$ for nodal values f.
  double integrate(const Eigen::VectorXd& nodal_values) const;

  /// Y_0(t) .. Y_K(t) at an arbitrary point t in [-1, 1].
  static Eigen::VectorXd harmonics_at(int n, int K, double t);
  /// First and second t-derivatives of Y_0..Y_K at t.
  static void harmonics_derivatives_at(int n, int K, double t, Eigen::VectorXd& d1,
                                       Eigen::VectorXd& d2);
  /// u(t) for coefficients c (Clenshaw-free direct recurrence).
  double evaluate(const Eigen::VectorXd& coeffs, double t) const;

  /// Gram matrix under the rule; identity when K < Q.
  Eigen::MatrixXd gram() const;

 private:
  QuadratureRule rule_;
  SphereParams params_;
  int K_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd values_;
  Eigen::MatrixXd weighted_values_;  // diag(w) * values
};

/// Lambda_k = prod_{j=0}^{m-1} (mu_k - j(j+1)), mu_k = k(k+n-1) + n(n-2)/4.
GjmsSpectrum gjms_eigenvalues(SphereParams params, int K);
/// Same eigenvalue through the log-Gamma ratio Gamma(k+n/2+m)/Gamma(k+n/2-m).
double gjms_eigenvalue_gamma(SphereParams params, int k);
/// Eigenvalue of the Laplace--Beltrami operator -Delta on degree-k harmonics of S^n.
double laplace_beltrami_eigenvalue(int n, int k);

/// \f$ \int_{S^n} P_m(u) u d\sigma = \sum_k \Lambda_k c_k^2 \f$.
double quadratic_form(const ZonalFunction& u, const GjmsSpectrum& spec);
/// Apply P_m in coefficient space.
ZonalFunction apply_gjms(const ZonalFunction& u, const GjmsSpectrum& spec);

/// L^p(S^n) norm by quadrature; p >= 1.
double lp_norm(const ZonalFunction& u, double p, const ZonalBasis& basis);
double lp_norm_nodal(const Eigen::VectorXd& nodal_values, double p, const ZonalBasis& basis);

/**
 * Max over k <= K of the relative residual of the zonal eigen-equation
 * \f$ (1-t^2) Y'' - n t Y' + k(k+n-1) Y = 0 \f$, with derivatives taken by
 * the barycentric differentiation matrix on the rule's nodes. Used to confirm
 * the Laplace--Beltrami spectrum before it enters the GJMS eigenvalues.
 */
double laplace_beltrami_ode_residual(const ZonalBasis& basis);

/// Defaults used across the toolkit: K = 64, Q = 2K + 8.
inline constexpr int kDefaultTruncation = 64;
inline int default_quadrature_order(int K) { return 2 * K + 8; }

/// A rule, basis and GJMS spectrum built together for one (n, m, K, Q).
struct SpectralSpace {
  SphereParams params;
  std::shared_ptr<const ZonalBasis> basis;
  GjmsSpectrum spectrum;

  static SpectralSpace make(SphereParams params, int K, int Q = -1);
  int degree() const { return basis->degree(); }
  ZonalFunction zero() const;
  ZonalFunction constant(double value) const;
};

}  // namespace sgjms

#endif  // SGJMS_SPECTRAL_CORE_HPP_

#ifndef SGJMS_LANE_EMDEN_HPP_
#define SGJMS_LANE_EMDEN_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgjms/conformal_geometry.hpp"
#include "sgjms/spectral_core.hpp"

namespace sgjms {

struct PowerTerm {
  double a = 1.0;  // >= 0
  double p = 1.0;  // >= 1
};

enum class Growth { subcritical, critical, supercritical };
std::string to_string(Growth g);

/// f(t) = sum_k a_k t^{p_k}, extended to t < 0 as an odd function (a_k |t|^{p_k-1} t).
class Nonlinearity {
 public:
  Nonlinearity() = default;
  /// Throws DomainError for a < 0, p < 1 or non-finite entries; sorts by exponent.
  explicit Nonlinearity(std::vector<PowerTerm> terms);
  static Nonlinearity power(double p, double a = 1.0);
  /// Parses "a1:p1,a2:p2". Throws DomainError on malformed input.
  static Nonlinearity parse(const std::string& text);

  double operator()(double t) const;
  double derivative(double t) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
  Eigen::VectorXd apply_derivative(const Eigen::VectorXd& u) const;

  const std::vector<PowerTerm>& terms() const { return terms_; }
  double max_exponent() const;
  bool is_zero() const;
  bool is_linear() const;
  Growth classify(const SphereParams& params) const;
  std::string to_string() const;

 private:
  std::vector<PowerTerm> terms_;
};

/// Positive root of Lambda_0 c = f(c); 0 for f = 0; nullopt when no positive root exists
/// (including the linear case, see linear_kernel_dimension).
std::optional<double> constant_solution(SphereParams params, const Nonlinearity& f);

/// For linear f(t) = a t: number of degrees k <= K with Lambda_k = a.
int linear_kernel_dimension(const GjmsSpectrum& spec, double a, double rel_tol = 1e-12);

enum class SolutionKind { constant, nonconstant, diverged };
std::string to_string(SolutionKind k);

struct SolveResult {
  ZonalFunction solution;
  double residual = 0.0;  // ||Lambda .* c - analyze(f(u))||_2
  int iters = 0;
  SolutionKind classification = SolutionKind::diverged;
  double negativity = 0.0;  // min of u over the quadrature nodes
  bool converged = false;
  bool damped = false;  // a step was shortened or regularized
  double distance_to_constant = 0.0;
  double mean_value = 0.0;  // c_0 / |S^n|^{1/2}
};

inline constexpr double kConstantDistanceThreshold = 1e-7;

/**
 * Damped Newton on R(c) = Lambda .* c - analyze(f(synthesize(c))) with the
 * dense Jacobian diag(Lambda) - B^T W diag(f'(u)) B. Steps come from a
 * complete orthogonal decomposition, so a singular Jacobian yields the
 * minimum-norm step. Converged when ||R|| <= tol * max(1, ||Lambda .* c||).
 */
SolveResult solve_newton(const SpectralSpace& space, const Nonlinearity& f,
                         const ZonalFunction& init, double tol = 1e-12, int max_iter = 60);

/// Fixed-point path u <- P_m^{-1} f(u); for a single power term the iterate is
/// rescaled by the Petviashvili factor (<P u,u>/<f(u),u>)^{p/(p-1)}.
SolveResult solve_green_iteration(const SpectralSpace& space, const Nonlinearity& f,
                                  const ZonalFunction& init, double tol = 1e-12,
                                  int max_iter = 500);

struct ProbeOutcome {
  int trial = 0;
  SolveResult result;
  bool nonnegative = false;
  bool trivial = false;        // converged to u = 0
  bool matches_constant = false;
  double constant_error = 0.0;  // |mean - c*| / c*
};

struct ProbeReport {
  SphereParams params;
  std::string nonlinearity;
  Growth growth = Growth::subcritical;
  int trials = 0;
  std::uint64_t seed = 0;
  double constant_value = 0.0;
  int converged = 0;
  int diverged = 0;
  int nonnegative = 0;
  int trivial = 0;
  int matched_constant = 0;
  int sign_changing = 0;
  double worst_constant_error = 0.0;
  bool linear = false;
  int kernel_dimension = 0;
  std::vector<ProbeOutcome> outcomes;
  std::vector<SolveResult> counterexamples;  // nonnegative, converged, not the constant

  /// Fraction of converged nonnegative nontrivial outcomes equal to the constant.
  double constant_fraction() const;
};

/// Newton from `trials` seeded positive starts; requires a subcritical f.
ProbeReport uniqueness_probe(const SpectralSpace& space, const Nonlinearity& f, int trials,
                             std::uint64_t seed, double tol = 1e-12);

struct MonotonicityReport {
  bool pass = true;
  double worst_violation = 0.0;  // max_i u(r_{i+1}) - u(r_i)
  int index = -1;                // i of the worst violation when failing
};

inline constexpr double kMonotonicitySlack = 1e-9;

MonotonicityReport verify_monotonicity(const RadialProfile& profile);
/// Pulls back `sol` to R^n on `grid` and checks the profile is non-increasing.
MonotonicityReport verify_symmetry_monotonicity(const ZonalFunction& sol, const ZonalBasis& basis,
                                                std::span<const double> grid);

struct SuperPolyharmonicReport {
  bool pass = true;
  std::vector<double> min_values;  // min of (-Delta)^i u, i = 1..m-1
  std::vector<double> scales;      // max |(-Delta)^i u|
  int failing_order = 0;           // first failing i, 0 if none
  double rel_tol = 1e-6;
};

/**
 * Checks (-Delta)^i u >= -rel_tol * scale_i on R^n for i = 1..m-1, where u is
 * the pullback of `sol`. Works with u = (1+t)^{n/2-m} w(t): in the variable t
 * the radial Laplacian maps (1+t)^a w to (1+t)^{a+1} times a polynomial, so
 * every iterate stays an exact Chebyshev series.
 */
SuperPolyharmonicReport verify_super_polyharmonic(const ZonalFunction& sol, int samples = 4000,
                                                  double rel_tol = 1e-6);

/// Finite-difference version for sampled profiles (r = 0 uses n u''(0)).
/// Throws AccuracyError when the Laplacian on the grid and on every other
/// point disagree by more than 1e-3 of its scale.
SuperPolyharmonicReport verify_super_polyharmonic(const RadialProfile& profile, int m,
                                                  double rel_tol = 1e-6);

}  // namespace sgjms

#endif  // SGJMS_LANE_EMDEN_HPP_

#ifndef SGJMS_INTEGRAL_KERNELS_HPP_
#define SGJMS_INTEGRAL_KERNELS_HPP_

#include <cstdint>

#include "sgjms/spectral_core.hpp"

namespace sgjms {

/// Funk--Hecke eigenvalues of the kernel |xi - eta|^{-(n-2m)} on zonal harmonics.
struct KernelSpectrum {
  SphereParams params;
  Eigen::VectorXd mu;  // mu_0 .. mu_K, positive and decreasing

  int degree() const { return static_cast<int>(mu.size()) - 1; }
};

/**
 * mu_k = |S^{n-1}| \int_{-1}^{1} (2-2t)^{-(n-2m)/2} C_k(t)/C_k(1) (1-t^2)^{(n-2)/2} dt.
 *
 * The kernel singularity combines with the sphere weight into the Jacobi
 * weight (1-t)^{m-1} (1+t)^{(n-2)/2}, so Gauss--Jacobi integrates each mu_k
 * exactly once Q > k/2. The rule is doubled until consecutive estimates agree
 * to `tol`; AccuracyError otherwise.
 */
KernelSpectrum funk_hecke_spectrum(SphereParams params, int K, double tol = 1e-10);

struct GreenConstants {
  double c_n = 0.0;   // 1/(n(n-2) v_n): Newtonian kernel constant on R^n
  double g_mn = 0.0;  // P_m^{-1} has kernel g_mn |xi - eta|^{-(n-2m)}
  double max_identity_error = 0.0;  // max_k |g_mn mu_k Lambda_k - 1|
};

/// Fixes g_mn = 1/(mu_0 Lambda_0) and checks g_mn mu_k Lambda_k = 1 for every k.
/// Throws InconsistencyError when the identity fails beyond `check_tol`.
GreenConstants green_constant(const KernelSpectrum& kernel, const GjmsSpectrum& spec,
                              double check_tol = 1e-6);

/// P_m^{-1} v, i.e. c_k / Lambda_k.
ZonalFunction green_apply(const ZonalFunction& v, const GjmsSpectrum& spec);

/// \f$ \iint v(\xi) v(\eta) |\xi-\eta|^{-(n-2m)} d\sigma d\sigma = \sum_k \hat\mu_k c_k^2 \f$.
double hls_functional(const ZonalFunction& v, const KernelSpectrum& kernel);

struct DualRatioResult {
  double maximum = 0.0;       // best g_mn I(v) / ||v||_{p'}^2
  double at_constant = 0.0;   // same ratio at v = 1
  ZonalFunction maximizer;
  int best_start = -1;
  int converged_starts = 0;
  int starts = 0;
};

/**
 * Multistart ascent of g_mn I(v)/||v||_{p'}^2, p' = p/(p-1), from nonnegative
 * zonal starts (the constant plus damped random perturbations). Requires
 * 2 < p < 2n/(n-2m).
 */
DualRatioResult hls_dual_ratio(const SpectralSpace& space, const KernelSpectrum& kernel, double p,
                               int trials, std::uint64_t seed, double tol_grad = 1e-10,
                               int max_iter = 2000);

}  // namespace sgjms

#endif  // SGJMS_INTEGRAL_KERNELS_HPP_

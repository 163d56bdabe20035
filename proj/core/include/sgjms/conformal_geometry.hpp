#ifndef SGJMS_CONFORMAL_GEOMETRY_HPP_
#define SGJMS_CONFORMAL_GEOMETRY_HPP_

#include <span>
#include <vector>

#include "sgjms/spectral_core.hpp"

namespace sgjms {

// Stereographic (Mobius) transport between radial functions on R^n and zonal
// functions on S^n. Orientation: x = 0 maps to the north pole t = 1 and
// |x| -> infinity to the south pole t = -1.

/// t = (1 - r^2) / (1 + r^2). Requires r >= 0.
double angle_from_radius(double r);
/// r = sqrt((1 - t) / (1 + t)); returns +infinity at t = -1. Requires t in [-1, 1].
double radius_from_angle(double t);
/// 2 / (1 + r^2), the square root of the pulled-back metric factor.
double conformal_factor(double r);

struct RadialProfile {
  SphereParams params;
  std::vector<double> grid;    // strictly increasing, grid[0] >= 0
  std::vector<double> values;  // u(grid[i])

  /// Throws DomainError on a malformed grid or non-finite values.
  void validate() const;
};

/// u(r) = (2/(1+r^2))^{n/2-m} v(t(r)).
RadialProfile pullback_to_plane(const ZonalFunction& v, const ZonalBasis& basis,
                                std::span<const double> grid);

/// max_i [u(r_i)(1+r_i^2)^{n/2-m}] - sup_v * 2^{n/2-m}; nonpositive (up to 1e-9)
/// when the decay bound holds.
double decay_bound_excess(const RadialProfile& u, double sup_v);

/// sup |v| over S^n, sampled at the rule nodes, the poles and a uniform angle grid.
double sup_abs(const ZonalFunction& v, const ZonalBasis& basis);

/// Radii concentrated near the origin: r_i = r_max * (i/(count-1))^2.
std::vector<double> graded_radial_grid(double r_max, int count);

struct BubbleParams {
  double lambda = 1.0;
  SphereParams params;
};

/// u_lambda(r) = lambda^{(n-2m)/2} (1 + lambda^2 r^2)^{m-n/2}.
double bubble_profile(const BubbleParams& b, double r);
/// v_lambda(t) = (2/(1+r^2))^{m-n/2} u_lambda(r(t)); t = -1 handled as a limit.
double bubble_sphere_value(const BubbleParams& b, double t);

struct BubbleExpansion {
  ZonalFunction v;
  double tail = 0.0;              // |c_K| / ||c||
  bool truncation_warning = false;
  int suggested_K = 0;            // degree at which the tail is expected below 1e-6
};

/// Zonal coefficients of the pushed-forward bubble v_lambda.
BubbleExpansion bubble_on_sphere(const BubbleParams& b, const ZonalBasis& basis);

struct TransportCheck {
  double sphere_integral = 0.0;
  double plane_integral = 0.0;
  double discrepancy = 0.0;  // relative; 0 when both sides vanish
  double plane_error_estimate = 0.0;
};

/**
 * Compares \f$ \int_{S^n} |v|^q d\sigma \f$ (rule quadrature) with
 * \f$ \int_{R^n} |u|^q (2/(1+r^2))^{n - q(n/2-m)} dx \f$ for the pullback u
 * (adaptive Gauss--Kronrod over [0,1] and, after r = 1/s, over [1,infinity)).
 * Throws AccuracyError if the radial quadrature misses tol.
 */
TransportCheck norm_transport_check(const ZonalFunction& v, double q, const ZonalBasis& basis,
                                    double tol = 1e-12);

}  // namespace sgjms

#endif  // SGJMS_CONFORMAL_GEOMETRY_HPP_

#include "sgjms/conformal_geometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sgjms/errors.hpp"

namespace sgjms {

double angle_from_radius(double r) {
  if (!(r >= 0.0)) throw DomainError("angle_from_radius: r must be >= 0");
  if (std::isinf(r)) return -1.0;
  const double r2 = r * r;
  return (1.0 - r2) / (1.0 + r2);
}

double radius_from_angle(double t) {
  if (!(t >= -1.0 && t <= 1.0)) throw DomainError("radius_from_angle: t must lie in [-1, 1]");
  if (t == -1.0) return std::numeric_limits<double>::infinity();
  return std::sqrt((1.0 - t) / (1.0 + t));
}

double conformal_factor(double r) {
  if (!(r >= 0.0)) throw DomainError("conformal_factor: r must be >= 0");
  return 2.0 / (1.0 + r * r);
}

void RadialProfile::validate() const {
  if (grid.size() != values.size())
    throw DomainError("RadialProfile: grid and values differ in length");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(values[i]))
      throw DomainError("RadialProfile: non-finite entry at index " + std::to_string(i));
    if (i == 0 && grid[i] < 0.0) throw DomainError("RadialProfile: negative radius");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw DomainError("RadialProfile: grid not strictly increasing at index " +
                        std::to_string(i));
  }
}

RadialProfile pullback_to_plane(const ZonalFunction& v, const ZonalBasis& basis,
                                std::span<const double> grid) {
  RadialProfile out{v.params, std::vector<double>(grid.begin(), grid.end()), {}};
  out.values.assign(grid.size(), 0.0);
  // validate the grid before evaluating anything
  RadialProfile probe{v.params, out.grid, out.values};
  probe.validate();
  const double e = v.params.half_n() - v.params.m;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    out.values[i] = std::pow(conformal_factor(r), e) * basis.evaluate(v.coeffs, angle_from_radius(r));
  }
  return out;
}

double decay_bound_excess(const RadialProfile& u, double sup_v) {
  const double e = u.params.half_n() - u.params.m;
  const double bound = sup_v * std::pow(2.0, e);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.grid.size(); ++i) {
    const double r2 = u.grid[i] * u.grid[i];
    worst = std::max(worst, u.values[i] * std::pow(1.0 + r2, e) - bound);
  }
  return worst;
}

double sup_abs(const ZonalFunction& v, const ZonalBasis& basis) {
  double s = basis.synthesize(v).cwiseAbs().maxCoeff();
  constexpr int kSamples = 2048;
  std::vector<double> ts(kSamples + 1), vals(kSamples + 1);
  for (int i = 0; i <= kSamples; ++i) {
    ts[i] = std::cos(std::numbers::pi * i / kSamples);
    vals[i] = std::abs(basis.evaluate(v.coeffs, ts[i]));
    s = std::max(s, vals[i]);
  }
  // polish every interior sampled peak with Brent's method
  auto neg = [&](double t) { return -std::abs(basis.evaluate(v.coeffs, t)); };
  for (int i = 1; i < kSamples; ++i) {
    if (vals[i] < vals[i - 1] || vals[i] < vals[i + 1]) continue;
    const auto best = boost::math::tools::brent_find_minima(neg, ts[i + 1], ts[i - 1], 52);
    s = std::max(s, -best.second);
  }
  return s;
}

std::vector<double> graded_radial_grid(double r_max, int count) {
  if (count < 2 || !(r_max > 0.0)) throw DomainError("graded_radial_grid: need count >= 2, r_max > 0");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / (count - 1);
    g[i] = r_max * s * s;
  }
  return g;
}

double bubble_profile(const BubbleParams& b, double r) {
  if (!(b.lambda > 0.0)) throw DomainError("bubble: lambda must be > 0");
  const double e = b.params.m - b.params.half_n();
  return std::pow(b.lambda, -e) * std::pow(1.0 + b.lambda * b.lambda * r * r, e);
}

double bubble_sphere_value(const BubbleParams& b, double t) {
  if (!(b.lambda > 0.0)) throw DomainError("bubble: lambda must be > 0");
  const double e = b.params.m - b.params.half_n();
  if (t <= -1.0) {
    // r -> infinity limit of (2/(1+r^2))^{-e} lambda^{-e} (1+lambda^2 r^2)^e
    return std::pow(2.0 * b.lambda, e);
  }
  const double r = radius_from_angle(t);
  return std::pow(conformal_factor(r), e) * bubble_profile(b, r);
}

BubbleExpansion bubble_on_sphere(const BubbleParams& b, const ZonalBasis& basis) {
  if (!(b.params == basis.params())) throw MismatchError("bubble_on_sphere: params mismatch");
  Eigen::VectorXd nodal(basis.order());
  for (int i = 0; i < basis.order(); ++i) nodal(i) = bubble_sphere_value(b, basis.nodes()(i));
  BubbleExpansion out;
  out.v = basis.analyze(nodal);
  const double norm = out.v.coeffs.norm();
  const int K = basis.degree();
  out.tail = norm > 0.0 ? std::abs(out.v.coeffs(K)) / norm : 0.0;
  out.suggested_K = K;
  constexpr double kTailLimit = 1e-6;
  if (out.tail > kTailLimit) {
    out.truncation_warning = true;
    // Coefficients decay like rho^{-k}; the profile is analytic inside the
    // Bernstein ellipse through t* = (lambda^2+1)/(lambda^2-1).
    const double rho = (b.lambda + 1.0) / std::abs(b.lambda - 1.0);
    const double extra = std::log(out.tail / kTailLimit) / std::log(rho);
    out.suggested_K = K + static_cast<int>(std::ceil(extra)) + 4;
  }
  return out;
}

TransportCheck norm_transport_check(const ZonalFunction& v, double q, const ZonalBasis& basis,
                                    double tol) {
  if (!(q >= 1.0)) throw DomainError("norm_transport_check: q must be >= 1");
  const SphereParams& P = v.params;
  const double e = P.half_n() - P.m;
  const double weight_exp = P.n - q * e;

  TransportCheck out;
  out.sphere_integral = basis.integrate(basis.synthesize(v).array().abs().pow(q).matrix());

  auto radial = [&](double r) {
    const double f = conformal_factor(r);
    const double u = std::pow(f, e) * basis.evaluate(v.coeffs, angle_from_radius(r));
    return std::pow(std::abs(u), q) * std::pow(f, weight_exp) * std::pow(r, P.n - 1);
  };
  auto inverted = [&](double s) {
    if (s <= 0.0) return 0.0;
    return radial(1.0 / s) / (s * s);
  };

  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err_inner = 0.0, err_outer = 0.0;
  const double inner = GK::integrate(radial, 0.0, 1.0, 15, tol, &err_inner);
  const double outer = GK::integrate(inverted, 0.0, 1.0, 15, tol, &err_outer);
  const double area = sphere_area(P.n - 1);
  out.plane_integral = area * (inner + outer);
  out.plane_error_estimate = area * (err_inner + err_outer);

  const double scale = std::max(std::abs(out.sphere_integral), std::abs(out.plane_integral));
  if (scale == 0.0) return out;
  if (out.plane_error_estimate > std::max(tol, 1e-10) * scale * 10.0) {
    throw AccuracyError("norm_transport_check: radial quadrature did not converge",
                        out.plane_error_estimate / scale);
  }
  out.discrepancy = std::abs(out.sphere_integral - out.plane_integral) / scale;
  return out;
}

}  // namespace sgjms

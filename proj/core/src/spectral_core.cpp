#include "sgjms/spectral_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "sgjms/errors.hpp"

namespace sgjms {

namespace {

// Off-diagonal coefficient of the orthonormal Gegenbauer recurrence,
// lambda = (n-1)/2. Independent of the total mass normalization.
double recurrence_b(double lambda, int k) {
  return std::sqrt(k * (k + 2.0 * lambda - 1.0) / (4.0 * (k + lambda) * (k + lambda - 1.0)));
}

void check_params(const SphereParams& a, const SphereParams& b, const char* where) {
  if (!(a == b)) {
    throw MismatchError(std::string(where) + ": sphere parameters differ (n=" +
                        std::to_string(a.n) + ",m=" + std::to_string(a.m) + " vs n=" +
                        std::to_string(b.n) + ",m=" + std::to_string(b.m) + ")");
  }
}

}  // namespace

SphereParams SphereParams::make(int n, int m) {
  if (m < 1) throw DomainError("SphereParams: m must be >= 1, got " + std::to_string(m));
  if (n < 3) throw DomainError("SphereParams: n must be >= 3, got " + std::to_string(n));
  if (n <= 2 * m)
    throw DomainError("SphereParams: need n > 2m, got n=" + std::to_string(n) +
                      ", m=" + std::to_string(m));
  return SphereParams{n, m};
}

double ZonalFunction::distance_to_constant() const {
  const double total = coeffs.norm();
  if (total == 0.0) return 0.0;
  return coeffs.tail(coeffs.size() - 1).norm() / total;
}

ZonalBasis::ZonalBasis(QuadratureRule rule, SphereParams params, int K)
    : rule_(std::move(rule)), params_(params), K_(K) {
  if (rule_.n != params_.n)
    throw MismatchError("ZonalBasis: rule built for n=" + std::to_string(rule_.n) +
                        " but params have n=" + std::to_string(params_.n));
  if (K < 0) throw DomainError("ZonalBasis: K must be >= 0");
  if (K >= rule_.order())
    throw DomainError("ZonalBasis: aliasing, K=" + std::to_string(K) +
                      " must be < Q=" + std::to_string(rule_.order()));
  const int Q = rule_.order();
  nodes_ = Eigen::Map<const Eigen::VectorXd>(rule_.nodes.data(), Q);
  weights_ = Eigen::Map<const Eigen::VectorXd>(rule_.weights.data(), Q);
  values_.resize(Q, K + 1);
  for (int i = 0; i < Q; ++i) values_.row(i) = harmonics_at(params_.n, K, nodes_(i)).transpose();
  weighted_values_ = weights_.asDiagonal() * values_;
}

Eigen::VectorXd ZonalBasis::harmonics_at(int n, int K, double t) {
  const double lambda = 0.5 * (n - 1);
  Eigen::VectorXd y(K + 1);
  y(0) = 1.0 / std::sqrt(sphere_area(n));
  if (K == 0) return y;
  y(1) = t * y(0) / recurrence_b(lambda, 1);
  for (int k = 1; k < K; ++k) {
    y(k + 1) = (t * y(k) - recurrence_b(lambda, k) * y(k - 1)) / recurrence_b(lambda, k + 1);
  }
  return y;
}

void ZonalBasis::harmonics_derivatives_at(int n, int K, double t, Eigen::VectorXd& d1,
                                          Eigen::VectorXd& d2) {
  const double lambda = 0.5 * (n - 1);
  const Eigen::VectorXd y = harmonics_at(n, K, t);
  d1 = Eigen::VectorXd::Zero(K + 1);
  d2 = Eigen::VectorXd::Zero(K + 1);
  if (K == 0) return;
  d1(1) = y(0) / recurrence_b(lambda, 1);
  for (int k = 1; k < K; ++k) {
    const double bk = recurrence_b(lambda, k);
    const double bk1 = recurrence_b(lambda, k + 1);
    d1(k + 1) = (y(k) + t * d1(k) - bk * d1(k - 1)) / bk1;
    d2(k + 1) = (2.0 * d1(k) + t * d2(k) - bk * d2(k - 1)) / bk1;
  }
}

Eigen::VectorXd ZonalBasis::synthesize(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() > K_ + 1)
    throw MismatchError("synthesize: degree " + std::to_string(coeffs.size() - 1) +
                        " exceeds basis degree " + std::to_string(K_));
  return values_.leftCols(coeffs.size()) * coeffs;
}

Eigen::VectorXd ZonalBasis::synthesize(const ZonalFunction& u) const {
  check_params(u.params, params_, "synthesize");
  return synthesize(u.coeffs);
}

Eigen::VectorXd ZonalBasis::analyze_coeffs(const Eigen::VectorXd& nodal_values) const {
  if (nodal_values.size() != order())
    throw MismatchError("analyze: expected " + std::to_string(order()) + " nodal values, got " +
                        std::to_string(nodal_values.size()));
  return weighted_values_.transpose() * nodal_values;
}

ZonalFunction ZonalBasis::analyze(const Eigen::VectorXd& nodal_values) const {
  return ZonalFunction{params_, analyze_coeffs(nodal_values)};
}

double ZonalBasis::integrate(const Eigen::VectorXd& nodal_values) const {
  if (nodal_values.size() != order()) throw MismatchError("integrate: dimension mismatch");
  return weights_.dot(nodal_values);
}

double ZonalBasis::evaluate(const Eigen::VectorXd& coeffs, double t) const {
  if (coeffs.size() > K_ + 1) throw MismatchError("evaluate: degree exceeds basis");
  if (coeffs.size() == 0) return 0.0;
  return harmonics_at(params_.n, static_cast<int>(coeffs.size()) - 1, t).dot(coeffs);
}

Eigen::MatrixXd ZonalBasis::gram() const { return values_.transpose() * weighted_values_; }

double laplace_beltrami_eigenvalue(int n, int k) { return static_cast<double>(k) * (k + n - 1); }

GjmsSpectrum gjms_eigenvalues(SphereParams params, int K) {
  params = SphereParams::make(params.n, params.m);
  if (K < 0) throw DomainError("gjms_eigenvalues: K must be >= 0");
  const double shift = 0.25 * params.n * (params.n - 2);
  GjmsSpectrum spec{params, Eigen::VectorXd(K + 1)};
  for (int k = 0; k <= K; ++k) {
    const double mu = laplace_beltrami_eigenvalue(params.n, k) + shift;
    double prod = 1.0;
    for (int j = 0; j < params.m; ++j) prod *= mu - j * (j + 1.0);
    spec.lambda(k) = prod;
  }
  return spec;
}

double gjms_eigenvalue_gamma(SphereParams params, int k) {
  params = SphereParams::make(params.n, params.m);
  const double h = k + params.half_n();
  return std::exp(std::lgamma(h + params.m) - std::lgamma(h - params.m));
}

double quadratic_form(const ZonalFunction& u, const GjmsSpectrum& spec) {
  check_params(u.params, spec.params, "quadratic_form");
  if (u.degree() > spec.degree())
    throw MismatchError("quadratic_form: function degree " + std::to_string(u.degree()) +
                        " exceeds spectrum degree " + std::to_string(spec.degree()));
  return (spec.lambda.head(u.coeffs.size()).array() * u.coeffs.array().square()).sum();
}

ZonalFunction apply_gjms(const ZonalFunction& u, const GjmsSpectrum& spec) {
  check_params(u.params, spec.params, "apply_gjms");
  if (u.degree() > spec.degree()) throw MismatchError("apply_gjms: truncation mismatch");
  return ZonalFunction{u.params,
                       (spec.lambda.head(u.coeffs.size()).array() * u.coeffs.array()).matrix()};
}

double lp_norm_nodal(const Eigen::VectorXd& nodal_values, double p, const ZonalBasis& basis) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  const double integral = basis.integrate(nodal_values.array().abs().pow(p).matrix());
  return std::pow(integral, 1.0 / p);
}

double lp_norm(const ZonalFunction& u, double p, const ZonalBasis& basis) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  return lp_norm_nodal(basis.synthesize(u), p, basis);
}

double laplace_beltrami_ode_residual(const ZonalBasis& basis) {
  const Eigen::VectorXd& x = basis.nodes();
  const int Q = basis.order();
  const int n = basis.params().n;

  // Barycentric weights in log form; Gauss nodes are distinct.
  Eigen::VectorXd logw(Q), sign(Q);
  for (int j = 0; j < Q; ++j) {
    double acc = 0.0, s = 1.0;
    for (int k = 0; k < Q; ++k) {
      if (k == j) continue;
      const double d = x(j) - x(k);
      acc -= std::log(std::abs(d));
      if (d < 0) s = -s;
    }
    logw(j) = acc;
    sign(j) = s;
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(Q, Q);
  for (int i = 0; i < Q; ++i) {
    double diag = 0.0;
    for (int j = 0; j < Q; ++j) {
      if (i == j) continue;
      const double ratio = sign(i) * sign(j) * std::exp(logw(j) - logw(i));
      D(i, j) = ratio / (x(i) - x(j));
      diag -= D(i, j);
    }
    D(i, i) = diag;
  }
  const Eigen::MatrixXd D2 = D * D;
  const Eigen::MatrixXd& Y = basis.values();
  const Eigen::MatrixXd dY = D * Y;
  const Eigen::MatrixXd d2Y = D2 * Y;

  double worst = 0.0;
  for (int k = 0; k <= basis.degree(); ++k) {
    const double ev = laplace_beltrami_eigenvalue(n, k);
    const double scale = std::max(1.0, ev) * Y.col(k).cwiseAbs().maxCoeff();
    for (int i = 0; i < Q; ++i) {
      const double r = (1.0 - x(i) * x(i)) * d2Y(i, k) - n * x(i) * dY(i, k) + ev * Y(i, k);
      worst = std::max(worst, std::abs(r) / scale);
    }
  }
  return worst;
}

SpectralSpace SpectralSpace::make(SphereParams params, int K, int Q) {
  params = SphereParams::make(params.n, params.m);
  if (Q < 0) Q = default_quadrature_order(K);
  auto basis = std::make_shared<const ZonalBasis>(build_quadrature(params.n, Q), params, K);
  return SpectralSpace{params, std::move(basis), gjms_eigenvalues(params, K)};
}

ZonalFunction SpectralSpace::zero() const {
  return ZonalFunction{params, Eigen::VectorXd::Zero(degree() + 1)};
}

ZonalFunction SpectralSpace::constant(double value) const {
  ZonalFunction u = zero();
  u.coeffs(0) = value * std::sqrt(sphere_area(params.n));
  return u;
}

}  // namespace sgjms

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sgjms/errors.hpp"
#include "sgjms/integral_kernels.hpp"
#include "sgjms/rayleigh_optimizer.hpp"

using namespace sgjms;
using doctest::Approx;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const std::pair<int, int> kPairs[] = {{3, 1}, {5, 1}, {5, 2}, {7, 3}, {4, 1}, {6, 2}, {9, 4}};

}  // namespace

TEST_SUITE("integral_kernels") {

TEST_CASE("funk_hecke_spectrum against independent quadrature") {
  const KernelSpectrum k13 = funk_hecke_spectrum(SphereParams::make(3, 1), 8);
  CHECK(rel(k13.mu(0), oracle::kFunkHeckeMu0_m1n3) < 1e-13);
  CHECK(rel(k13.mu(0), 16.0 * std::numbers::pi / 3.0) < 1e-13);
  CHECK(rel(k13.mu(1), oracle::kFunkHeckeMu1_m1n3) < 1e-13);
  CHECK(rel(funk_hecke_spectrum(SphereParams::make(5, 2), 0).mu(0), oracle::kFunkHeckeMu0_m2n5) < 1e-13);
  CHECK(rel(funk_hecke_spectrum(SphereParams::make(7, 3), 4).mu(2), oracle::kFunkHeckeMu2_m3n7) < 1e-13);

  for (auto [n, m] : kPairs) {
    const KernelSpectrum ks = funk_hecke_spectrum(SphereParams::make(n, m), 10);
    for (int k = 0; k <= 10; ++k) {
      INFO("n=" << n << " m=" << m << " k=" << k);
      CHECK(rel(ks.mu(k), oracle::funk_hecke(m, n, k)) < 1e-9);
      CHECK(rel(ks.mu(k), oracle::riesz_eigenvalue(m, n, k)) < 1e-12);
    }
  }
}

TEST_CASE("spectrum is positive and strictly decreasing") {
  for (auto [n, m] : kPairs) {
    const KernelSpectrum ks = funk_hecke_spectrum(SphereParams::make(n, m), 40);
    CHECK(ks.degree() == 40);
    for (int k = 0; k <= 40; ++k) CHECK(ks.mu(k) > 0.0);
    for (int k = 1; k <= 40; ++k) CHECK(ks.mu(k) < ks.mu(k - 1));
  }
}

TEST_CASE("m = 1, n = 3 spectrum times (k+1/2)(k+3/2) is constant") {
  const KernelSpectrum ks = funk_hecke_spectrum(SphereParams::make(3, 1), 32);
  const double c0 = ks.mu(0) * 0.5 * 1.5;
  for (int k = 0; k <= 32; ++k) CHECK(std::abs(ks.mu(k) * (k + 0.5) * (k + 1.5) / c0 - 1.0) < 1e-8);
}

TEST_CASE("green constants and the spectral identity") {
  const SphereParams p13 = SphereParams::make(3, 1);
  const GreenConstants g13 = green_constant(funk_hecke_spectrum(p13, 32), gjms_eigenvalues(p13, 32));
  CHECK(g13.c_n == Approx(1.0 / (4.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(g13.g_mn == Approx(1.0 / (4.0 * std::numbers::pi)).epsilon(1e-13));

  for (auto [n, m] : kPairs) {
    const SphereParams p = SphereParams::make(n, m);
    const KernelSpectrum ks = funk_hecke_spectrum(p, 32);
    const GjmsSpectrum sp = gjms_eigenvalues(p, 32);
    const GreenConstants g = green_constant(ks, sp);
    CHECK(g.g_mn > 0.0);
    CHECK(g.c_n == Approx(1.0 / (n * (n - 2) * ball_volume(n))).epsilon(1e-14));
    CHECK(g.max_identity_error <= 1e-8);
    CHECK(std::abs(g.g_mn * ks.mu(0) * sp.lambda(0) - 1.0) < 1e-15);
    for (int k = 0; k <= 32; ++k) {
      // oracle: closed-form Riesz eigenvalue and Gamma-ratio GJMS eigenvalue
      const double prod = g.g_mn * oracle::riesz_eigenvalue(m, n, k) * oracle::gjms_gamma(m, n, k);
      CHECK(std::abs(prod - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("green_constant rejects a corrupted spectrum") {
  const SphereParams p = SphereParams::make(5, 2);
  KernelSpectrum ks = funk_hecke_spectrum(p, 8);
  ks.mu(5) *= 1.001;
  CHECK_THROWS_AS(green_constant(ks, gjms_eigenvalues(p, 8)), InconsistencyError);
  CHECK_THROWS_AS(green_constant(funk_hecke_spectrum(p, 8), gjms_eigenvalues(p, 6)), MismatchError);
  CHECK_THROWS_AS(green_constant(funk_hecke_spectrum(p, 8), gjms_eigenvalues(SphereParams::make(7, 2), 8)),
                  MismatchError);
}

TEST_CASE("green_apply inverts the GJMS operator") {
  const auto space = SpectralSpace::make(SphereParams::make(5, 2), 24);
  ZonalFunction y0 = space.zero();
  y0.coeffs(0) = 1.0;
  const ZonalFunction g0 = green_apply(y0, space.spectrum);
  CHECK(g0.coeffs(0) == Approx(1.0 / space.spectrum.lambda(0)).epsilon(1e-15));

  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    ZonalFunction v = space.zero();
    for (int k = 0; k <= 24; ++k) v.coeffs(k) = normal(rng);
    const ZonalFunction back = apply_gjms(green_apply(v, space.spectrum), space.spectrum);
    CHECK((back.coeffs - v.coeffs).norm() <= 1e-12 * v.coeffs.norm());
  }
}

TEST_CASE("green_apply of Y_k matches the kernel integral") {
  // g_mn * int |xi - eta|^{-(n-2m)} Y_k(eta) = g_mn mu_k Y_k(xi) by Funk--Hecke (oracle quadrature)
  for (auto [n, m] : {std::pair{3, 1}, {5, 2}}) {
    const SphereParams p = SphereParams::make(n, m);
    const auto space = SpectralSpace::make(p, 8);
    const GreenConstants g = green_constant(funk_hecke_spectrum(p, 8), space.spectrum);
    for (int k = 0; k <= 8; ++k) {
      ZonalFunction yk = space.zero();
      yk.coeffs(k) = 1.0;
      const double expect = g.g_mn * oracle::funk_hecke(m, n, k);
      CHECK(std::abs(green_apply(yk, space.spectrum).coeffs(k) - expect) <= 1e-8 * expect);
    }
  }
}

TEST_CASE("hls_functional") {
  const SphereParams p = SphereParams::make(3, 1);
  const auto space = SpectralSpace::make(p, 4);
  const KernelSpectrum ks = funk_hecke_spectrum(p, 4);
  ZonalFunction y0 = space.zero();
  y0.coeffs(0) = 1.0;
  CHECK(hls_functional(y0, ks) == Approx(ks.mu(0)).epsilon(1e-15));
  CHECK(hls_functional(space.constant(1.0), ks) == Approx(ks.mu(0) * sphere_area(3)).epsilon(1e-14));
  CHECK(hls_functional(space.zero(), ks) == 0.0);

  // bounded by mu_0 ||v||^2 with equality only for constants
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    ZonalFunction v = space.zero();
    for (int k = 0; k <= 4; ++k) v.coeffs(k) = normal(rng);
    CHECK(hls_functional(v, ks) > 0.0);
    CHECK(hls_functional(v, ks) < ks.mu(0) * v.coeffs.squaredNorm());
  }
}

TEST_CASE("hls_functional agrees with the direct double integral") {
  for (auto [n, m] : {std::pair{3, 1}, {5, 2}}) {
    const SphereParams p = SphereParams::make(n, m);
    const auto space = SpectralSpace::make(p, 3);
    const KernelSpectrum ks = funk_hecke_spectrum(p, 3);
    ZonalFunction v = space.zero();
    v.coeffs << 0.7, -0.4, 0.25, 0.1;
    auto vt = [&](double t) {
      double s = 0.0;
      for (int k = 0; k <= 3; ++k) s += v.coeffs(k) * oracle::orthonormal_harmonic(n, k, t);
      return s;
    };
    const double direct = oracle::hls_direct(m, n, vt);
    INFO("n=" << n << " m=" << m);
    CHECK(rel(hls_functional(v, ks), direct) < 1e-6);
  }
}

TEST_CASE("dual ratio") {
  const SphereParams p = SphereParams::make(3, 1);
  const auto space = SpectralSpace::make(p, 16);
  const KernelSpectrum ks = funk_hecke_spectrum(p, 16);
  const DualRatioResult r = hls_dual_ratio(space, ks, 4.0, 6, 5);
  const double inv_s = 1.0 / oracle::kSharp_m1n3p4;
  CHECK(rel(r.at_constant, inv_s) < 1e-12);
  CHECK(r.maximum >= r.at_constant - 1e-14);
  CHECK(rel(r.maximum, inv_s) < 1e-5);
  CHECK(r.maximizer.distance_to_constant() < 1e-4);
  CHECK(r.starts == 6);
  CHECK(r.converged_starts >= 1);
  CHECK_THROWS_AS(hls_dual_ratio(space, ks, 2.0, 2, 1), DomainError);
  CHECK_THROWS_AS(hls_dual_ratio(space, ks, 6.0, 2, 1), DomainError);
}

}

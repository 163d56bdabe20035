#include "sgjms/lane_emden.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "sgjms/errors.hpp"
#include "sgjms/integral_kernels.hpp"
#include "sgjms/parallel.hpp"

namespace sgjms {

// ---------------------------------------------------------------------------
// Nonlinearity

std::string to_string(Growth g) {
  switch (g) {
    case Growth::subcritical: return "subcritical";
    case Growth::critical: return "critical";
    case Growth::supercritical: return "supercritical";
  }
  return "unknown";
}

std::string to_string(SolutionKind k) {
  switch (k) {
    case SolutionKind::constant: return "constant";
    case SolutionKind::nonconstant: return "nonconstant";
    case SolutionKind::diverged: return "diverged";
  }
  return "unknown";
}

Nonlinearity::Nonlinearity(std::vector<PowerTerm> terms) : terms_(std::move(terms)) {
  for (const PowerTerm& t : terms_) {
    if (!std::isfinite(t.a) || !std::isfinite(t.p))
      throw DomainError("Nonlinearity: non-finite coefficient or exponent");
    if (t.a < 0.0) throw DomainError("Nonlinearity: coefficients must be >= 0");
    if (t.p < 1.0) throw DomainError("Nonlinearity: exponents must be >= 1");
  }
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const PowerTerm& x, const PowerTerm& y) { return x.p < y.p; });
}

Nonlinearity Nonlinearity::power(double p, double a) { return Nonlinearity({PowerTerm{a, p}}); }

Nonlinearity Nonlinearity::parse(const std::string& text) {
  std::vector<PowerTerm> terms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw DomainError("Nonlinearity: expected a:p, got '" + item + "'");
    try {
      std::size_t used_a = 0, used_p = 0;
      const std::string sa = item.substr(0, colon), sp = item.substr(colon + 1);
      const double a = std::stod(sa, &used_a);
      const double p = std::stod(sp, &used_p);
      if (sa.find_first_not_of(" \t", used_a) != std::string::npos ||
          sp.find_first_not_of(" \t", used_p) != std::string::npos)
        throw std::invalid_argument("trailing characters");
      terms.push_back({a, p});
    } catch (const std::logic_error&) {
      throw DomainError("Nonlinearity: malformed term '" + item + "'");
    }
  }
  if (terms.empty()) throw DomainError("Nonlinearity: no terms in '" + text + "'");
  return Nonlinearity(std::move(terms));
}

double Nonlinearity::operator()(double t) const {
  double s = 0.0;
  const double at = std::abs(t);
  for (const PowerTerm& term : terms_) s += term.a * std::pow(at, term.p - 1.0) * t;
  return s;
}

double Nonlinearity::derivative(double t) const {
  double s = 0.0;
  const double at = std::abs(t);
  for (const PowerTerm& term : terms_)
    s += term.p == 1.0 ? term.a : term.a * term.p * std::pow(at, term.p - 1.0);
  return s;
}

Eigen::VectorXd Nonlinearity::apply(const Eigen::VectorXd& u) const {
  return u.unaryExpr([this](double t) { return (*this)(t); });
}

Eigen::VectorXd Nonlinearity::apply_derivative(const Eigen::VectorXd& u) const {
  return u.unaryExpr([this](double t) { return derivative(t); });
}

double Nonlinearity::max_exponent() const { return terms_.empty() ? 0.0 : terms_.back().p; }

bool Nonlinearity::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const PowerTerm& t) { return t.a == 0.0; });
}

bool Nonlinearity::is_linear() const {
  return !is_zero() && std::all_of(terms_.begin(), terms_.end(), [](const PowerTerm& t) {
    return t.a == 0.0 || t.p == 1.0;
  });
}

Growth Nonlinearity::classify(const SphereParams& params) const {
  double pmax = 0.0;
  for (const PowerTerm& t : terms_)
    if (t.a > 0.0) pmax = std::max(pmax, t.p);
  const double crit = params.critical_lane_emden_exponent();
  if (std::abs(pmax - crit) <= 1e-12 * crit) return Growth::critical;
  return pmax < crit ? Growth::subcritical : Growth::supercritical;
}

std::string Nonlinearity::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << ',';
    os << terms_[i].a << ':' << terms_[i].p;
  }
  return os.str();
}

std::optional<double> constant_solution(SphereParams params, const Nonlinearity& f) {
  params = SphereParams::make(params.n, params.m);
  const double lambda0 = gjms_eigenvalues(params, 0).lambda(0);
  if (f.is_zero()) return 0.0;
  if (f.is_linear()) return std::nullopt;
  const auto& terms = f.terms();
  if (terms.size() == 1) return std::pow(lambda0 / terms[0].a, 1.0 / (terms[0].p - 1.0));

  // g(c) = f(c)/c - Lambda_0 is nondecreasing on (0, inf).
  auto g = [&](double c) {
    double s = -lambda0;
    for (const PowerTerm& t : terms) s += t.a * std::pow(c, t.p - 1.0);
    return s;
  };
  double linear_part = -lambda0;
  for (const PowerTerm& t : terms)
    if (t.p == 1.0) linear_part += t.a;
  if (linear_part >= 0.0) return std::nullopt;
  double hi = 1.0;
  while (g(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e300) return std::nullopt;
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

int linear_kernel_dimension(const GjmsSpectrum& spec, double a, double rel_tol) {
  int count = 0;
  for (int k = 0; k <= spec.degree(); ++k)
    if (std::abs(spec.lambda(k) - a) <= rel_tol * spec.lambda(k)) ++count;
  return count;
}

// ---------------------------------------------------------------------------
// Solvers

namespace {

void finish(SolveResult& r, const SpectralSpace& space) {
  const Eigen::VectorXd nodal = space.basis->synthesize(r.solution.coeffs);
  r.negativity = nodal.minCoeff();
  r.distance_to_constant = r.solution.distance_to_constant();
  r.mean_value = r.solution.coeffs(0) / std::sqrt(sphere_area(space.params.n));
  if (!r.converged) {
    r.classification = SolutionKind::diverged;
  } else {
    r.classification = r.distance_to_constant <= kConstantDistanceThreshold
                           ? SolutionKind::constant
                           : SolutionKind::nonconstant;
  }
}

Eigen::VectorXd residual_of(const SpectralSpace& space, const Nonlinearity& f,
                            const Eigen::VectorXd& c) {
  const ZonalBasis& B = *space.basis;
  return (space.spectrum.lambda.array() * c.array()).matrix() -
         B.analyze_coeffs(f.apply(B.synthesize(c)));
}

double residual_scale(const SpectralSpace& space, const Eigen::VectorXd& c) {
  return std::max(1.0, (space.spectrum.lambda.array() * c.array()).matrix().norm());
}

Eigen::VectorXd padded_coeffs(const ZonalFunction& init, const SpectralSpace& space) {
  if (!(init.params == space.params)) throw MismatchError("solver: params mismatch");
  if (init.degree() > space.degree()) throw MismatchError("solver: truncation mismatch");
  if (!init.coeffs.allFinite()) throw DomainError("solver: non-finite initial guess");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(space.degree() + 1);
  c.head(init.coeffs.size()) = init.coeffs;
  return c;
}

constexpr double kDivergenceBound = 1e8;

}  // namespace

SolveResult solve_newton(const SpectralSpace& space, const Nonlinearity& f,
                         const ZonalFunction& init, double tol, int max_iter) {
  const ZonalBasis& B = *space.basis;
  const Eigen::MatrixXd& Y = B.values();
  Eigen::VectorXd c = padded_coeffs(init, space);
  SolveResult out;
  Eigen::VectorXd R = residual_of(space, f, c);
  double rnorm = R.norm();
  bool diverged = false;

  for (int it = 0;; ++it) {
    out.iters = it;
    if (rnorm <= tol * residual_scale(space, c)) {
      out.converged = true;
      break;
    }
    if (it >= max_iter) break;

    const Eigen::VectorXd fprime = f.apply_derivative(B.synthesize(c));
    Eigen::MatrixXd J = -(Y.transpose() * (B.weights().cwiseProduct(fprime)).asDiagonal() * Y);
    J.diagonal() += space.spectrum.lambda;
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
    if (cod.rank() < J.rows()) out.damped = true;
    const Eigen::VectorXd step = cod.solve(-R);

    double s = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial, trial_R;
    for (int halvings = 0; halvings < 40; ++halvings, s *= 0.5) {
      trial = c + s * step;
      trial_R = residual_of(space, f, trial);
      if (trial_R.allFinite() && trial_R.norm() <= (1.0 - 1e-4 * s) * rnorm) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    if (s < 1.0) out.damped = true;
    c = std::move(trial);
    R = std::move(trial_R);
    rnorm = R.norm();
    if (c.norm() > kDivergenceBound) {
      diverged = true;
      out.iters = it + 1;
      break;
    }
  }
  out.solution = ZonalFunction{space.params, c};
  out.residual = rnorm;
  if (diverged) out.converged = false;
  finish(out, space);
  return out;
}

SolveResult solve_green_iteration(const SpectralSpace& space, const Nonlinearity& f,
                                  const ZonalFunction& init, double tol, int max_iter) {
  const ZonalBasis& B = *space.basis;
  const Eigen::VectorXd& lambda = space.spectrum.lambda;
  Eigen::VectorXd c = padded_coeffs(init, space);
  const bool single_power = f.terms().size() == 1 && f.terms()[0].p > 1.0;
  const double gamma = single_power ? f.terms()[0].p / (f.terms()[0].p - 1.0) : 0.0;

  SolveResult out;
  for (int it = 0;; ++it) {
    const Eigen::VectorXd F = B.analyze_coeffs(f.apply(B.synthesize(c)));
    out.residual = ((lambda.array() * c.array()).matrix() - F).norm();
    out.iters = it;
    if (out.residual <= tol * residual_scale(space, c)) {
      out.converged = true;
      break;
    }
    if (it >= max_iter || !F.allFinite() || c.norm() > kDivergenceBound) break;
    Eigen::VectorXd next = F.cwiseQuotient(lambda);
    if (single_power) {
      const double num = (lambda.array() * c.array().square()).sum();
      const double den = c.dot(F);
      if (!(den > 0.0)) break;
      next *= std::pow(num / den, gamma);
    }
    c = std::move(next);
  }
  out.solution = ZonalFunction{space.params, c};
  finish(out, space);
  return out;
}

// ---------------------------------------------------------------------------
// Uniqueness probe

double ProbeReport::constant_fraction() const {
  const int pool = nonnegative - trivial;
  return pool > 0 ? static_cast<double>(matched_constant) / pool : 1.0;
}

ProbeReport uniqueness_probe(const SpectralSpace& space, const Nonlinearity& f, int trials,
                             std::uint64_t seed, double tol) {
  if (trials < 1) throw DomainError("uniqueness_probe: trials must be >= 1");
  ProbeReport report;
  report.params = space.params;
  report.nonlinearity = f.to_string();
  report.growth = f.classify(space.params);
  report.trials = trials;
  report.seed = seed;
  if (report.growth != Growth::subcritical)
    throw DomainError("uniqueness_probe: nonlinearity must be subcritical, max exponent " +
                      std::to_string(f.max_exponent()) + " vs critical " +
                      std::to_string(space.params.critical_lane_emden_exponent()));

  if (f.is_linear()) {
    double a = 0.0;
    for (const PowerTerm& t : f.terms()) a += t.a;
    report.linear = true;
    report.kernel_dimension = linear_kernel_dimension(space.spectrum, a);
    return report;
  }

  const std::optional<double> cstar = constant_solution(space.params, f);
  if (!cstar || *cstar <= 0.0)
    throw DomainError("uniqueness_probe: no positive constant solution for f = " + f.to_string());
  report.constant_value = *cstar;

  const ZonalBasis& B = *space.basis;
  const int K = space.degree();
  std::vector<ProbeOutcome> outcomes(trials);

  parallel_for_index(trials, [&](int i) {
    ZonalFunction start = space.constant(*cstar);
    if (i > 0) {
      std::seed_seq seq{static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(i),
                        std::uint64_t{0x4c'45}};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> normal(0.0, 1.0);
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      const double level = 0.6 + uniform(rng);           // mean in [0.6, 1.6] c*
      const double amplitude = (0.1 + 0.8 * uniform(rng)) * level;
      Eigen::VectorXd pert = Eigen::VectorXd::Zero(K + 1);
      for (int k = 1; k <= K; ++k) pert(k) = normal(rng) / (1.0 + k);
      Eigen::VectorXd nodal = B.synthesize(pert);
      const double peak = nodal.cwiseAbs().maxCoeff();
      if (peak > 0.0) pert *= amplitude / peak;  // keeps min over nodes >= (level - amplitude) c* > 0
      start.coeffs = *cstar * pert;
      start.coeffs(0) = level * *cstar * std::sqrt(sphere_area(space.params.n));
    }
    ProbeOutcome& o = outcomes[i];
    o.trial = i;
    o.result = solve_newton(space, f, start, tol);
    const SolveResult& r = o.result;
    const double scale = B.synthesize(r.solution.coeffs).cwiseAbs().maxCoeff();
    o.nonnegative = r.converged && r.negativity >= -1e-9 * std::max(scale, 1.0);
    o.trivial = r.converged && scale <= 1e-9 * *cstar;
    o.constant_error = std::abs(r.mean_value - *cstar) / *cstar;
    o.matches_constant = r.converged && r.classification == SolutionKind::constant &&
                         o.constant_error <= 1e-8;
  });

  for (ProbeOutcome& o : outcomes) {
    if (o.result.converged) ++report.converged;
    if (o.result.classification == SolutionKind::diverged) ++report.diverged;
    if (o.result.converged && !o.nonnegative) ++report.sign_changing;
    if (o.nonnegative) {
      ++report.nonnegative;
      if (o.trivial) {
        ++report.trivial;
      } else if (o.matches_constant) {
        ++report.matched_constant;
        report.worst_constant_error = std::max(report.worst_constant_error, o.constant_error);
      } else {
        report.counterexamples.push_back(o.result);
      }
    }
  }
  report.outcomes = std::move(outcomes);
  return report;
}

// ---------------------------------------------------------------------------
// Verifiers

MonotonicityReport verify_monotonicity(const RadialProfile& profile) {
  profile.validate();
  MonotonicityReport rep;
  rep.worst_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < profile.values.size(); ++i) {
    const double rise = profile.values[i + 1] - profile.values[i];
    if (rise > rep.worst_violation) {
      rep.worst_violation = rise;
      rep.index = static_cast<int>(i);
    }
  }
  if (profile.values.size() < 2) rep.worst_violation = 0.0;
  rep.pass = rep.worst_violation <= kMonotonicitySlack;
  if (rep.pass) rep.index = -1;
  return rep;
}

MonotonicityReport verify_symmetry_monotonicity(const ZonalFunction& sol, const ZonalBasis& basis,
                                                std::span<const double> grid) {
  return verify_monotonicity(pullback_to_plane(sol, basis, grid));
}

namespace {

// Chebyshev series on [-1, 1].
struct Cheb {
  std::vector<double> a;

  static Cheb interpolate(int degree, const auto& fn) {
    const int N = degree;
    std::vector<double> vals(N + 1);
    for (int j = 0; j <= N; ++j) vals[j] = fn(std::cos(std::numbers::pi * j / N));
    Cheb c;
    c.a.assign(N + 1, 0.0);
    for (int k = 0; k <= N; ++k) {
      double s = 0.0;
      for (int j = 0; j <= N; ++j) {
        const double w = (j == 0 || j == N) ? 0.5 : 1.0;
        s += w * vals[j] * std::cos(std::numbers::pi * k * j / N);
      }
      c.a[k] = 2.0 * s / N;
    }
    c.a[0] *= 0.5;
    c.a[N] *= 0.5;
    return c;
  }

  double operator()(double t) const {
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(a.size()) - 1; k >= 1; --k) {
      const double b0 = 2.0 * t * b1 - b2 + a[k];
      b2 = b1;
      b1 = b0;
    }
    return t * b1 - b2 + (a.empty() ? 0.0 : a[0]);
  }

  Cheb derivative() const {
    const int N = static_cast<int>(a.size()) - 1;
    Cheb d;
    d.a.assign(std::max(N, 1), 0.0);
    if (N < 1) return d;
    std::vector<double> b(N + 2, 0.0);
    for (int k = N; k >= 1; --k) b[k - 1] = b[k + 1] + 2.0 * k * a[k];
    b[0] *= 0.5;
    for (int k = 0; k < N; ++k) d.a[k] = b[k];
    return d;
  }

  Cheb times_t() const {
    Cheb r;
    r.a.assign(a.size() + 1, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (k == 0) {
        r.a[1] += a[0];
      } else {
        r.a[k + 1] += 0.5 * a[k];
        r.a[k - 1] += 0.5 * a[k];
      }
    }
    return r;
  }

  Cheb& axpy(double s, const Cheb& x) {
    if (x.a.size() > a.size()) a.resize(x.a.size(), 0.0);
    for (std::size_t k = 0; k < x.a.size(); ++k) a[k] += s * x.a[k];
    return *this;
  }
};

Cheb one_plus_t(const Cheb& w) { return Cheb{w.a}.axpy(1.0, w.times_t()); }
Cheb one_minus_t(const Cheb& w) { return Cheb{w.a}.axpy(-1.0, w.times_t()); }

// w_new with -Delta[(1+t)^e w] = (1+t)^{e+1} w_new.
Cheb minus_laplacian_factor(const Cheb& w, double e, int n) {
  const Cheb w1 = w.derivative();
  const Cheb w2 = w1.derivative();
  // bracket1 = e(e-1) w + 2e (1+t) w' + (1+t)^2 w''
  Cheb b1 = Cheb{w.a};
  for (double& x : b1.a) x *= e * (e - 1.0);
  b1.axpy(2.0 * e, one_plus_t(w1));
  b1.axpy(1.0, one_plus_t(one_plus_t(w2)));
  // bracket2 = e w + (1+t) w'
  Cheb b2 = Cheb{w.a};
  for (double& x : b2.a) x *= e;
  b2.axpy(1.0, one_plus_t(w1));
  // (n - 2 + 2t) * bracket2
  Cheb b2s = Cheb{b2.a};
  for (double& x : b2s.a) x *= (n - 2.0);
  b2s.axpy(2.0, b2.times_t());
  Cheb out = one_minus_t(b1);
  out.axpy(-1.0, b2s);
  for (double& x : out.a) x = -x;
  return out;
}

}  // namespace

SuperPolyharmonicReport verify_super_polyharmonic(const ZonalFunction& sol, int samples,
                                                  double rel_tol) {
  const SphereParams& P = sol.params;
  SuperPolyharmonicReport rep;
  rep.rel_tol = rel_tol;
  if (P.m < 2) return rep;  // nothing to check for m = 1

  const int K = sol.degree();
  Cheb w = Cheb::interpolate(K + 2, [&](double t) {
    return ZonalBasis::harmonics_at(P.n, K, t).dot(sol.coeffs);
  });
  double e = P.half_n() - P.m;
  for (int i = 1; i < P.m; ++i) {
    w = minus_laplacian_factor(w, e, P.n);
    e += 1.0;
    double lo = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (int j = 0; j < samples; ++j) {
      // sample t = cos(theta) on (-1, 1]; the south pole is r = infinity where u_i -> 0
      const double t = std::cos(std::numbers::pi * j / samples);
      const double value = std::pow(1.0 + t, e) * w(t);
      lo = std::min(lo, value);
      scale = std::max(scale, std::abs(value));
    }
    rep.min_values.push_back(lo);
    rep.scales.push_back(scale);
    if (lo < -rel_tol * scale && rep.pass) {
      rep.pass = false;
      rep.failing_order = i;
    }
  }
  return rep;
}

namespace {

// Radial Laplacian u'' + (n-1) u'/r on a nonuniform grid; drops the last point.
std::vector<double> fd_laplacian(const std::vector<double>& r, const std::vector<double>& u, int n) {
  const std::size_t N = r.size();
  std::vector<double> out(N - 1);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    if (i == 0) {
      if (r[0] != 0.0) throw AccuracyError("super-polyharmonic check: grid must start at r = 0", 0.0);
      // even extension: u(-r1) = u(r1); Laplacian -> n u''(0)
      out[0] = n * 2.0 * (u[1] - u[0]) / (r[1] * r[1]);
      continue;
    }
    const double hl = r[i] - r[i - 1];
    const double hr = r[i + 1] - r[i];
    const double d2 = 2.0 * (hl * u[i + 1] - (hl + hr) * u[i] + hr * u[i - 1]) / (hl * hr * (hl + hr));
    const double d1 = (hl * hl * u[i + 1] - hr * hr * u[i - 1] + (hr * hr - hl * hl) * u[i]) /
                      (hl * hr * (hl + hr));
    out[i] = d2 + (n - 1.0) * d1 / r[i];
  }
  return out;
}

}  // namespace

SuperPolyharmonicReport verify_super_polyharmonic(const RadialProfile& profile, int m,
                                                  double rel_tol) {
  profile.validate();
  SuperPolyharmonicReport rep;
  rep.rel_tol = rel_tol;
  if (m < 2) return rep;
  const int n = profile.params.n;
  if (static_cast<int>(profile.grid.size()) < 8 * m)
    throw AccuracyError("super-polyharmonic check: grid too short", 0.0);

  std::vector<double> r = profile.grid;
  std::vector<double> u = profile.values;
  // coarse copy on every other point for the stencil consistency test
  std::vector<double> rc, uc;
  for (std::size_t i = 0; i < r.size(); i += 2) {
    rc.push_back(r[i]);
    uc.push_back(u[i]);
  }
  for (int i = 1; i < m; ++i) {
    std::vector<double> fine = fd_laplacian(r, u, n);
    std::vector<double> coarse = fd_laplacian(rc, uc, n);
    r.pop_back();
    rc.pop_back();
    for (double& x : fine) x = -x;
    for (double& x : coarse) x = -x;

    double scale = 0.0;
    for (double x : fine) scale = std::max(scale, std::abs(x));
    double mismatch = 0.0;
    // compare at shared points away from the truncated right edge
    const std::size_t shared = std::min(coarse.size(), fine.size() / 2);
    for (std::size_t j = 1; j + 2 < shared; ++j)
      mismatch = std::max(mismatch, std::abs(coarse[j] - fine[2 * j]));
    if (scale > 0.0 && mismatch > 1e-3 * scale)
      throw AccuracyError("super-polyharmonic check: grid too coarse for order " +
                              std::to_string(i),
                          mismatch / scale);

    const double lo = *std::min_element(fine.begin(), fine.end());
    rep.min_values.push_back(lo);
    rep.scales.push_back(scale);
    if (lo < -rel_tol * scale && rep.pass) {
      rep.pass = false;
      rep.failing_order = i;
    }
    u = std::move(fine);
    uc = std::move(coarse);
  }
  return rep;
}

}  // namespace sgjms

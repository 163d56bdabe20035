#include "sgjms/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "sgjms/errors.hpp"

namespace sgjms {

namespace {

struct JacobiValue {
  double p;      // P_Q(x)
  double dp;     // P_Q'(x)
};

// Three-term recurrence for P_Q^{(a,b)}(x) together with its derivative.
JacobiValue jacobi_eval(int Q, double a, double b, double x) {
  double p0 = 1.0;
  double p1 = 0.5 * (a - b + (a + b + 2.0) * x);
  if (Q == 0) return {1.0, 0.0};
  double pm1 = p0;
  double p = p1;
  for (int k = 2; k <= Q; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double next = (c2 * p - c3 * pm1) / c1;
    pm1 = p;
    p = next;
  }
  // (2Q+a+b)(1-x^2) P_Q' = Q[(a-b) - (2Q+a+b)x] P_Q + 2(Q+a)(Q+b) P_{Q-1}
  const double s = 2.0 * Q + a + b;
  const double dp =
      (Q * ((a - b) - s * x) * p + 2.0 * (Q + a) * (Q + b) * pm1) / (s * (1.0 - x * x));
  return {p, dp};
}

std::vector<double> golub_welsch_nodes(int Q, double a, double b) {
  Eigen::VectorXd diag(Q);
  Eigen::VectorXd sub(std::max(Q - 1, 0));
  for (int k = 0; k < Q; ++k) {
    const double s = 2.0 * k + a + b;
    if (k == 0) {
      diag(k) = (b - a) / (a + b + 2.0);
    } else {
      diag(k) = (b * b - a * a) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < Q; ++k) {
    const double s = 2.0 * k + a + b;
    sub(k - 1) = std::sqrt(4.0 * k * (k + a) * (k + b) * (k + a + b) /
                           (s * s * (s + 1.0) * (s - 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> nodes(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + Q);
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

}  // namespace

double sphere_area(int n) {
  if (n < 1) throw DomainError("sphere_area: n must be >= 1, got " + std::to_string(n));
  const double h = 0.5 * (n + 1);
  return std::exp(std::log(2.0) + h * std::log(std::numbers::pi) - std::lgamma(h));
}

double ball_volume(int n) {
  if (n < 1) throw DomainError("ball_volume: n must be >= 1, got " + std::to_string(n));
  const double h = 0.5 * n;
  return std::exp(h * std::log(std::numbers::pi) - std::lgamma(h + 1.0));
}

GaussRule gauss_jacobi(int Q, double alpha, double beta) {
  if (Q < 1) throw DomainError("gauss_jacobi: Q must be >= 1");
  if (alpha <= -1.0 || beta <= -1.0)
    throw DomainError("gauss_jacobi: exponents must exceed -1");

  GaussRule rule;
  rule.nodes = golub_welsch_nodes(Q, alpha, beta);
  rule.weights.resize(Q);

  const double log_const = std::lgamma(Q + alpha + 1.0) + std::lgamma(Q + beta + 1.0) -
                           std::lgamma(Q + alpha + beta + 1.0) - std::lgamma(Q + 1.0) +
                           (alpha + beta + 1.0) * std::log(2.0);

  for (int i = 0; i < Q; ++i) {
    double x = rule.nodes[i];
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
      const JacobiValue v = jacobi_eval(Q, alpha, beta, x);
      const double dx = v.p / v.dp;
      x -= dx;
      if (std::abs(dx) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
        converged = true;
        break;
      }
    }
    if (!converged || !(x > -1.0 && x < 1.0)) {
      std::ostringstream os;
      os << "gauss_jacobi: Newton polish did not converge for node " << i << " (Q=" << Q
         << ", alpha=" << alpha << ", beta=" << beta << ")";
      throw ConvergenceError(os.str());
    }
    const JacobiValue v = jacobi_eval(Q, alpha, beta, x);
    rule.nodes[i] = x;
    rule.weights[i] = std::exp(log_const) / ((1.0 - x * x) * v.dp * v.dp);
  }
  return rule;
}

QuadratureRule build_quadrature(int n, int Q) {
  if (n < 2) throw DomainError("build_quadrature: n must be >= 2, got " + std::to_string(n));
  if (Q < 4) throw DomainError("build_quadrature: Q must be >= 4, got " + std::to_string(Q));
  const double e = 0.5 * (n - 2);
  GaussRule g;
  try {
    g = gauss_jacobi(Q, e, e);
  } catch (const ConvergenceError& err) {
    throw ConvergenceError(std::string(err.what()) + " while building sphere rule n=" +
                           std::to_string(n) + " Q=" + std::to_string(Q));
  }
  const double scale = sphere_area(n - 1);
  QuadratureRule rule;
  rule.n = n;
  rule.nodes = std::move(g.nodes);
  rule.weights = std::move(g.weights);
  for (double& w : rule.weights) w *= scale;
  return rule;
}

double sphere_moment(int n, int j) {
  if (n < 2 || j < 0) throw DomainError("sphere_moment: need n >= 2, j >= 0");
  if (j % 2 == 1) return 0.0;
  const double a = 0.5 * (j + 1);
  const double b = 0.5 * n;
  return sphere_area(n - 1) * std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

}  // namespace sgjms

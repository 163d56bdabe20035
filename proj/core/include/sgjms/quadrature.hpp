#ifndef SGJMS_QUADRATURE_HPP_
#define SGJMS_QUADRATURE_HPP_

#include <vector>

namespace sgjms {

/// Surface area of the unit sphere S^n in R^{n+1}: 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_area(int n);

/// Volume of the unit ball in R^n.
double ball_volume(int n);

struct GaussRule {
  std::vector<double> nodes;    // ascending, in (-1, 1)
  std::vector<double> weights;  // > 0
};

/**
 * @brief Gauss--Jacobi rule for \f$ \int_{-1}^{1} f(x) (1-x)^\alpha (1+x)^\beta dx \f$.
 *
 * Nodes come from the Golub--Welsch eigenproblem and are then polished by
 * Newton iteration on \f$ P_Q^{(\alpha,\beta)} \f$. Weights use the closed
 * form in terms of \f$ P_Q' \f$, which keeps small weights accurate to full
 * relative precision. Exact for polynomials of degree \f$ \le 2Q-1 \f$.
 *
 * Throws DomainError for Q < 1 or alpha, beta <= -1 and ConvergenceError
 * if the Newton polish stalls.
 */
GaussRule gauss_jacobi(int Q, double alpha, double beta);

/// Nodes t = cos(polar angle) and weights for zonal integrands on S^n.
struct QuadratureRule {
  int n = 0;
  std::vector<double> nodes;
  std::vector<double> weights;  // sum = |S^n|

  int order() const { return static_cast<int>(nodes.size()); }
};

/// Gauss--Jacobi with alpha = beta = (n-2)/2, scaled by |S^{n-1}|. Requires n >= 2, Q >= 4.
QuadratureRule build_quadrature(int n, int Q);

/// Analytic value of \f$ \int_{S^n} t^j d\sigma \f$.
double sphere_moment(int n, int j);

}  // namespace sgjms

#endif  // SGJMS_QUADRATURE_HPP_

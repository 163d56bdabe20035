#ifndef SGJMS_DETAIL_PROJECTED_DESCENT_HPP_
#define SGJMS_DETAIL_PROJECTED_DESCENT_HPP_

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <vector>

namespace sgjms::detail {

struct TracePoint {
  int iter;
  double value;
  double grad_norm;
};

struct DescentOutcome {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iters = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

struct DescentSettings {
  double step0 = 1.0;
  double tol_grad = 1e-10;
  int max_iter = 2000;
  double armijo = 1e-4;
  double shrink = 0.5;
  bool keep_trace = false;
};

/**
 * Minimizes a scale-invariant objective over the unit sphere of some norm.
 *
 * `objective(x, grad)` returns the value and writes the gradient (grad may be
 * null for value-only calls); `normalize(x)` rescales x onto the constraint
 * set. The search direction is -precond .* grad, and grad_norm is the dual
 * norm sqrt(sum grad_k^2 * precond_k).
 */
template <class Objective, class Normalize>
DescentOutcome projected_descent(Eigen::VectorXd x, const Eigen::VectorXd& precond,
                                 const DescentSettings& s, Objective&& objective,
                                 Normalize&& normalize) {
  DescentOutcome out;
  x = normalize(x);
  Eigen::VectorXd grad(x.size());
  double value = objective(x, &grad);
  double step = s.step0;
  for (int it = 0;; ++it) {
    const double gnorm = std::sqrt((grad.array().square() * precond.array()).sum());
    if (s.keep_trace) out.trace.push_back({it, value, gnorm});
    out.iters = it;
    out.grad_norm = gnorm;
    if (gnorm <= s.tol_grad) {
      out.converged = true;
      break;
    }
    if (it >= s.max_iter) break;

    const Eigen::VectorXd dir = -(precond.array() * grad.array()).matrix();
    const double slope = grad.dot(dir);
    double trial_step = std::min(2.0 * step, 1e3 * s.step0);
    bool accepted = false;
    Eigen::VectorXd trial;
    Eigen::VectorXd trial_grad(x.size());
    double trial_value = 0.0;
    bool have_grad = false;
    // Once the predicted decrease drops below the roundoff of the value, the
    // value can no longer rank steps; fall back to requiring a smaller gradient.
    const double band = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
    while (trial_step > 1e-18 * s.step0) {
      trial = normalize(x + trial_step * dir);
      trial_value = objective(trial, nullptr);
      if (std::isfinite(trial_value)) {
        if (trial_value <= value + s.armijo * trial_step * slope &&
            trial_value < value - band) {
          accepted = true;
          break;
        }
        if (std::abs(trial_value - value) <= band) {
          trial_value = objective(trial, &trial_grad);
          const double tnorm = std::sqrt((trial_grad.array().square() * precond.array()).sum());
          if (tnorm < gnorm) {
            accepted = have_grad = true;
            break;
          }
        }
      }
      trial_step *= s.shrink;
    }
    if (!accepted) break;  // stalled at roundoff level
    if (!have_grad) {
      // Minimizer of the parabola through value, slope and trial_value; damps the
      // period-two oscillation of modes sitting at the stability edge of the step.
      const double curv = trial_value - value - slope * trial_step;
      if (curv > band) {
        const double tq = -slope * trial_step * trial_step / (2.0 * curv);
        if (tq > 0.1 * trial_step && tq < 4.0 * trial_step &&
            std::abs(tq - trial_step) > 0.1 * trial_step) {
          Eigen::VectorXd alt = normalize(x + tq * dir);
          const double alt_value = objective(alt, nullptr);
          if (std::isfinite(alt_value) && alt_value < trial_value) {
            trial = std::move(alt);
            trial_value = alt_value;
            trial_step = tq;
          }
        }
      }
    }
    step = trial_step;
    x = std::move(trial);
    if (have_grad) {
      value = trial_value;
      grad = std::move(trial_grad);
    } else {
      value = objective(x, &grad);
    }
  }
  out.x = std::move(x);
  out.value = value;
  return out;
}

}  // namespace sgjms::detail

#endif  // SGJMS_DETAIL_PROJECTED_DESCENT_HPP_

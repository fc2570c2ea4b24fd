#include "milnor/value_solver.hpp"

#include <cmath>

#include <Eigen/LU>

#include "milnor/errors.hpp"

namespace milnor {

Eigen::VectorXd min_norm_solution(const RealJacobian& j, const Eigen::Vector2d& rhs,
                                  double regular_tol) {
  const Eigen::Vector2d sv = singular_values(j);
  if (!(sv[1] > regular_tol))
    throw NumericalError(FailureKind::critical_point,
                         "rank-deficient Jacobian (smallest singular value " +
                             std::to_string(sv[1]) + ")");
  const Eigen::Matrix2d gram = j * j.transpose();
  return j.transpose() * gram.inverse() * rhs;
}

SolveResult solve_for_value(const MixedPolynomial& f, Complex target, const Point& seed,
                            const SolveOptions& options) {
  Eigen::VectorXd x = to_real(seed);
  Linearization lin = linearize(f, seed);
  double residual = std::abs(lin.value - target);
  bool left_ball = false;

  auto newton_step = [&](const Linearization& l) {
    const Complex r = target - l.value;
    Eigen::VectorXd step = min_norm_solution(l.jacobian, {r.real(), r.imag()}, options.regular_tol);
    const double len = step.norm();
    if (len > options.max_step) step *= options.max_step / len;
    return step;
  };

  for (int it = 0; it < options.max_iter; ++it) {
    if (residual <= options.tol) {
      for (int k = 0; k < options.polish_steps; ++k) {
        Eigen::VectorXd trial;
        try {
          trial = x + newton_step(lin);
        } catch (const NumericalError&) {
          break;
        }
        if (trial.norm() > options.ball_radius) break;
        Linearization next = linearize(f, to_complex(trial));
        const double r = std::abs(next.value - target);
        if (!(r < residual)) break;
        x = std::move(trial);
        lin = std::move(next);
        residual = r;
      }
      return {to_complex(x), residual, it};
    }
    const Eigen::VectorXd step = newton_step(lin);
    bool accepted = false;
    double scale = 1.0;
    for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
      const Eigen::VectorXd trial = x + scale * step;
      if (trial.norm() > options.ball_radius) {
        left_ball = true;
        continue;
      }
      Linearization next = linearize(f, to_complex(trial));
      const double r = std::abs(next.value - target);
      if (r < residual) {
        x = trial;
        lin = std::move(next);
        residual = r;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (left_ball)
        throw NumericalError(FailureKind::left_ball, "Newton iterate leaves the ball");
      throw NumericalError(FailureKind::no_convergence,
                           "no descent step (residual " + std::to_string(residual) + ")");
    }
  }
  if (residual <= options.tol) return {to_complex(x), residual, options.max_iter};
  throw NumericalError(FailureKind::no_convergence,
                       "residual " + std::to_string(residual) + " after " +
                           std::to_string(options.max_iter) + " iterations");
}

}  // namespace milnor

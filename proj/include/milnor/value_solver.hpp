#pragma once

#include <limits>

#include <Eigen/Core>

#include "milnor/jacobian.hpp"
#include "milnor/mixed_polynomial.hpp"

namespace milnor {

/// Minimal-Euclidean-norm solution of J v = rhs for a 2 x 2n Jacobian,
/// v = J^T (J J^T)^{-1} rhs. Throws NumericalError(critical_point) when the
/// smallest singular value of J is <= regular_tol.
Eigen::VectorXd min_norm_solution(const RealJacobian& j, const Eigen::Vector2d& rhs,
                                  double regular_tol);

struct SolveOptions {
  double tol = 1e-9;                                            // on |f(z) - target|
  int max_iter = 80;
  double ball_radius = std::numeric_limits<double>::infinity();  // iterates stay in ||z|| <= this
  double max_step = std::numeric_limits<double>::infinity();     // cap on one Newton step length
  double regular_tol = 0.0;
  int polish_steps = 3;  // extra full steps after reaching tol, kept while they help
};

struct SolveResult {
  Point z;
  double residual = 0.0;
  int iterations = 0;
};

/// Damped Gauss-Newton with minimal-norm steps on the 2-equation real system
/// (Re f, Im f) = (Re target, Im target). Steps are halved until the residual
/// decreases and the iterate stays inside the ball. Throws NumericalError
/// (no_convergence, left_ball, critical_point).
SolveResult solve_for_value(const MixedPolynomial& f, Complex target, const Point& seed,
                            const SolveOptions& options = {});

}  // namespace milnor

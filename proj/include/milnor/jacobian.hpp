#pragma once

#include <Eigen/Core>

#include "milnor/mixed_polynomial.hpp"

namespace milnor {

/// Real Jacobian of (Re f, Im f): 2 rows, columns x1, y1, ..., xn, yn with
/// z_j = x_j + i y_j. This is the tangential map of f at a point.
using RealJacobian = Eigen::Matrix<double, 2, Eigen::Dynamic>;

/// The pair (df/dz_j, df/dzbar_j).
struct WirtingerDerivatives {
  Eigen::VectorXcd dz;
  Eigen::VectorXcd dzbar;
};

WirtingerDerivatives wirtinger_derivatives(const MixedPolynomial& f, const Point& z);

/// Builds the real Jacobian from the Wirtinger pair:
/// df/dx_j = df/dz_j + df/dzbar_j,  df/dy_j = i (df/dz_j - df/dzbar_j).
RealJacobian to_real_jacobian(const WirtingerDerivatives& d);

RealJacobian wirtinger_jacobian(const MixedPolynomial& f, const Point& z);

/// f(z) and its real Jacobian from a single pass over the terms.
struct Linearization {
  Complex value;
  RealJacobian jacobian;
};

Linearization linearize(const MixedPolynomial& f, const Point& z);

/// Singular values of a 2 x m matrix, largest first.
Eigen::Vector2d singular_values(const RealJacobian& j);

/// True iff the smallest singular value of the real Jacobian exceeds tol.
bool is_mixed_regular_point(const MixedPolynomial& f, const Point& z, double tol = 1e-8);

/// (x1, y1, ..., xn, yn) <-> (z1, ..., zn).
Eigen::VectorXd to_real(const Point& z);
Point to_complex(const Eigen::VectorXd& x);

}  // namespace milnor

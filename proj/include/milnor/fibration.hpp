#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "milnor/mixed_polynomial.hpp"
#include "milnor/seeding.hpp"

namespace milnor {

/// Parameters of the tubular fibration f : dE(r0, delta) -> S^1_delta.
struct FibrationConfig {
  double r0 = 1.0;
  double r1 = 0.5;
  double delta = 1e-3;
  double tol_fiber = 1e-9;
  double tol_angle = 1e-6;
  double ode_step = 0.0031415;
  /// Trajectories must stay in ||z|| <= r0 (1 - margin).
  double margin = 0.05;
  /// Smallest singular value below which the horizontal field is undefined.
  double tol_regular = 1e-8;
  int max_newton_iter = 80;

  /// Throws InputError on violated invariants.
  void validate() const;
  double working_radius() const noexcept { return r0 * (1.0 - margin); }
  bool in_ball(const Point& z) const noexcept { return z.norm() <= r0; }
  /// Membership in E(r0, delta) and dE(r0, delta), relative tube tolerance `rel`.
  bool in_tube(Complex value, const Point& z) const noexcept;
  bool on_tube_boundary(Complex value, const Point& z, double rel = 1e-6) const noexcept;
};

/// Heuristic fiber radius 1e-3 * r0^d, d the smallest total degree of f.
double default_delta(const MixedPolynomial& f, double r0);

/// A point of F_theta = f^{-1}(target) in the ball, |target| = delta.
struct FiberPoint {
  Point z;
  Complex target;
  double residual = 0.0;
};

/// Discretized path with the unwrapped accumulated angle of f along it.
struct SampledPath {
  std::vector<Point> nodes;
  std::vector<double> psi;
};

/// Damped Gauss-Newton (minimal-norm steps) onto f = target from `seed`.
/// Throws NumericalError (no_convergence, left_ball, critical_point).
FiberPoint find_fiber_point(const MixedPolynomial& f, Complex target, const FibrationConfig& cfg,
                            const Point& seed);

/// Minimal-norm V with J(p) V = (Re i f(p), Im i f(p)): moving along V keeps
/// |f| fixed and turns arg f at unit speed. Real vector (x1, y1, ..., xn, yn).
/// Throws NumericalError(critical_point) at mixed-critical points.
Eigen::VectorXd horizontal_field(const MixedPolynomial& f, const Point& p,
                                 const FibrationConfig& cfg);

/// h_theta(p): RK4 on V with fixed step <= ode_step, each step followed by a
/// Gauss-Newton projection onto f = delta e^{i(current angle)}.
FiberPoint flow_monodromy(const MixedPolynomial& f, const FiberPoint& p, double theta,
                          const FibrationConfig& cfg);

/// Every projected node of the flow from p through angle theta, p included.
std::vector<FiberPoint> flow_trajectory(const MixedPolynomial& f, const FiberPoint& p,
                                        double theta, const FibrationConfig& cfg);

/// psi_k: cumulative sum of wrapped increments of arg f along the nodes, psi_0 = 0.
/// Throws NumericalError(undersampled) when an increment exceeds
/// max_increment in magnitude, and (critical_point) when f vanishes at a node.
std::vector<double> accumulated_angles(const MixedPolynomial& f, const std::vector<Point>& nodes,
                                       double max_increment);

/// Largest per-node angle increment accepted by rotation_number.
inline constexpr double kMaxAngleIncrement = 1.5707963267948966;  // pi / 2

/// Builds a SampledPath (psi included) from nodes.
SampledPath make_path(const MixedPolynomial& f, std::vector<Point> nodes,
                      double max_increment = kMaxAngleIncrement);

/// Winding number of f o path about 0. The path must close in the f-image
/// (|arg f(last) - arg f(first)| <= tol_angle, mod 2 pi). Throws
/// NumericalError (open_loop, undersampled, non_integral_winding).
int rotation_number(const MixedPolynomial& f, const SampledPath& path, double tol_angle = 1e-6);

/// Pushes node k along the flow by -psi_k, so that every node lands in the
/// fiber over arg f(node_0). Nodes must lie on dE: | |f| - delta | <= 1e-6 delta.
/// Throws InputError for nodes off the tube; NumericalError with the node index.
SampledPath deform_path_to_fiber(const MixedPolynomial& f, const SampledPath& path,
                                 const FibrationConfig& cfg);

/// Flow trajectory from `base` through total angle -2 pi m, one node per
/// step. f o loop winds -m times. m = 0 gives the constant path.
SampledPath correcting_loop(const MixedPolynomial& f, const FiberPoint& base, int m,
                            const FibrationConfig& cfg);

/// Path product a . b; b must start where a ends (the shared node is kept once).
SampledPath concatenate(const MixedPolynomial& f, const SampledPath& a, const SampledPath& b);

/// max_k |arg f(node_k) - arg f(node_0)| (wrapped), the in-fiber spread of a path.
double angle_spread(const MixedPolynomial& f, const std::vector<Point>& nodes);

struct TransversalityProbe {
  std::size_t attempted = 0;
  std::size_t located = 0;  // points of f^{-1}(eta) on a sphere S_r, r in [r1, r0]
  std::size_t transverse = 0;
  /// Smallest sigma_min of the 3 x 2n Jacobian of (Re f, Im f, |z|^2) seen,
  /// each row normalized.
  double min_singular_value = 0.0;
};

/// Diagnostic only: samples f^{-1}(eta) for |eta| <= delta on spheres
/// between r1 and r0 and tests the rank of (df, d|z|^2). Never a proof of the
/// Hamm-Le condition.
TransversalityProbe probe_transversality(const MixedPolynomial& f, const FibrationConfig& cfg,
                                         std::size_t samples, Seed seed);

}  // namespace milnor

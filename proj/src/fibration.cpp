#include "milnor/fibration.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "milnor/errors.hpp"
#include "milnor/jacobian.hpp"
#include "milnor/value_solver.hpp"

namespace milnor {
namespace {

constexpr double kTubeRelTol = 1e-6;

SolveOptions projection_options(const FibrationConfig& cfg) {
  SolveOptions opt;
  opt.tol = cfg.tol_fiber;
  opt.max_iter = 25;
  opt.ball_radius = cfg.r0;
  opt.max_step = 0.1 * cfg.r0;
  return opt;
}

Point project(const MixedPolynomial& f, Complex target, const Point& z, const FibrationConfig& cfg,
              double& residual) {
  const SolveResult r = solve_for_value(f, target, z, projection_options(cfg));
  residual = r.residual;
  return r.z;
}

// Fixed-step RK4 on dz/ds = V(z), projecting after each step. `visit` sees
// every node including the start.
template <typename Visitor>
FiberPoint integrate_flow(const MixedPolynomial& f, const FiberPoint& p, double theta,
                          const FibrationConfig& cfg, Visitor&& visit) {
  visit(p);
  if (theta == 0.0) return p;
  const auto steps = static_cast<long>(std::ceil(std::abs(theta) / cfg.ode_step));
  const double h = theta / static_cast<double>(steps);
  const double radius = std::abs(p.target);
  const double angle0 = std::arg(p.target);
  const double limit = cfg.working_radius();

  Eigen::VectorXd x = to_real(p.z);
  FiberPoint cur = p;
  auto field = [&](const Eigen::VectorXd& at) { return horizontal_field(f, to_complex(at), cfg); };
  for (long k = 1; k <= steps; ++k) {
    const Eigen::VectorXd k1 = field(x);
    const Eigen::VectorXd k2 = field(x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = field(x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = field(x + h * k3);
    const Eigen::VectorXd moved = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    cur.target = std::polar(radius, angle0 + static_cast<double>(k) * h);
    cur.z = project(f, cur.target, to_complex(moved), cfg, cur.residual);
    if (cur.z.norm() > limit)
      throw NumericalError(FailureKind::left_ball,
                           "trajectory leaves the working ball at step " + std::to_string(k));
    x = to_real(cur.z);
    visit(cur);
  }
  return cur;
}

double wrap_angle(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

}  // namespace

void FibrationConfig::validate() const {
  if (!(r0 > 0.0 && r1 > 0.0 && r1 < r0)) throw InputError("need 0 < r1 < r0");
  if (!(delta > 0.0)) throw InputError("need delta > 0");
  if (!(tol_fiber > 0.0 && tol_angle > 0.0)) throw InputError("tolerances must be positive");
  if (!(ode_step > 0.0 && ode_step <= 0.1)) throw InputError("ode_step must lie in (0, 0.1]");
  if (!(margin >= 0.0 && margin < 1.0)) throw InputError("margin must lie in [0, 1)");
  if (!(tol_regular >= 0.0)) throw InputError("tol_regular must be non-negative");
  if (max_newton_iter < 1) throw InputError("max_newton_iter must be positive");
}

bool FibrationConfig::in_tube(Complex value, const Point& z) const noexcept {
  return z.norm() <= r0 && std::abs(value) <= delta;
}

bool FibrationConfig::on_tube_boundary(Complex value, const Point& z, double rel) const noexcept {
  return z.norm() <= r0 && std::abs(std::abs(value) - delta) <= rel * delta;
}

double default_delta(const MixedPolynomial& f, double r0) {
  return 1e-3 * std::pow(r0, f.min_total_degree());
}

FiberPoint find_fiber_point(const MixedPolynomial& f, Complex target, const FibrationConfig& cfg,
                            const Point& seed) {
  if (f.is_constant()) throw InputError("fiber of a constant polynomial");
  if (seed.norm() > cfg.r0) throw InputError("seed point outside the ball");
  SolveOptions opt;
  opt.tol = cfg.tol_fiber;
  opt.max_iter = cfg.max_newton_iter;
  opt.ball_radius = cfg.r0;
  opt.max_step = 0.25 * cfg.r0;
  const SolveResult r = solve_for_value(f, target, seed, opt);
  return {r.z, target, r.residual};
}

Eigen::VectorXd horizontal_field(const MixedPolynomial& f, const Point& p,
                                 const FibrationConfig& cfg) {
  const Linearization lin = linearize(f, p);
  const Complex velocity = Complex(0.0, 1.0) * lin.value;
  return min_norm_solution(lin.jacobian, {velocity.real(), velocity.imag()}, cfg.tol_regular);
}

FiberPoint flow_monodromy(const MixedPolynomial& f, const FiberPoint& p, double theta,
                          const FibrationConfig& cfg) {
  return integrate_flow(f, p, theta, cfg, [](const FiberPoint&) {});
}

std::vector<FiberPoint> flow_trajectory(const MixedPolynomial& f, const FiberPoint& p,
                                        double theta, const FibrationConfig& cfg) {
  std::vector<FiberPoint> out;
  integrate_flow(f, p, theta, cfg, [&](const FiberPoint& q) { out.push_back(q); });
  return out;
}

std::vector<double> accumulated_angles(const MixedPolynomial& f, const std::vector<Point>& nodes,
                                       double max_increment) {
  std::vector<double> psi;
  psi.reserve(nodes.size());
  Complex prev;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Complex v = evaluate(f, nodes[k]);
    if (v == Complex(0.0, 0.0))
      throw NumericalError(FailureKind::critical_point,
                           "f vanishes at path node " + std::to_string(k));
    if (k == 0) {
      psi.push_back(0.0);
    } else {
      const double inc = std::arg(v / prev);
      if (std::abs(inc) > max_increment)
        throw NumericalError(FailureKind::undersampled,
                             "angle increment " + std::to_string(inc) + " at node " +
                                 std::to_string(k));
      psi.push_back(psi.back() + inc);
    }
    prev = v;
  }
  return psi;
}

SampledPath make_path(const MixedPolynomial& f, std::vector<Point> nodes, double max_increment) {
  SampledPath path;
  path.psi = accumulated_angles(f, nodes, max_increment);
  path.nodes = std::move(nodes);
  return path;
}

int rotation_number(const MixedPolynomial& f, const SampledPath& path, double tol_angle) {
  if (path.nodes.empty()) throw InputError("rotation number of an empty path");
  const std::vector<double> psi = accumulated_angles(f, path.nodes, kMaxAngleIncrement);
  const double gap =
      wrap_angle(std::arg(evaluate(f, path.nodes.back())) - std::arg(evaluate(f, path.nodes.front())));
  if (std::abs(gap) > tol_angle)
    throw NumericalError(FailureKind::open_loop,
                         "image loop misses closure by " + std::to_string(gap) + " rad");
  const double turns = psi.back() / (2.0 * std::numbers::pi);
  const double m = std::round(turns);
  if (std::abs(turns - m) > 0.01)
    throw NumericalError(FailureKind::non_integral_winding,
                         "accumulated " + std::to_string(turns) + " turns");
  return static_cast<int>(m);
}

SampledPath deform_path_to_fiber(const MixedPolynomial& f, const SampledPath& path,
                                 const FibrationConfig& cfg) {
  if (path.nodes.empty()) throw InputError("cannot deform an empty path");
  std::vector<Complex> values;
  values.reserve(path.nodes.size());
  for (std::size_t k = 0; k < path.nodes.size(); ++k) {
    values.push_back(evaluate(f, path.nodes[k]));
    if (!cfg.on_tube_boundary(values.back(), path.nodes[k], kTubeRelTol))
      throw InputError("path node " + std::to_string(k) + " is not on the tube |f| = delta");
  }
  const std::vector<double> psi = accumulated_angles(f, path.nodes, kMaxAngleIncrement);

  SampledPath out;
  out.nodes.reserve(path.nodes.size());
  for (std::size_t k = 0; k < path.nodes.size(); ++k) {
    try {
      FiberPoint start{path.nodes[k], cfg.delta * values[k] / std::abs(values[k]),
                       std::abs(std::abs(values[k]) - cfg.delta)};
      if (start.residual > cfg.tol_fiber)
        start.z = project(f, start.target, start.z, cfg, start.residual);
      out.nodes.push_back(psi[k] == 0.0 ? start.z : flow_monodromy(f, start, -psi[k], cfg).z);
    } catch (const NumericalError& e) {
      throw NumericalError(e.kind(), "deforming node " + std::to_string(k) + ": " + e.what());
    }
  }
  out.psi.assign(out.nodes.size(), 0.0);
  return out;
}

SampledPath correcting_loop(const MixedPolynomial& f, const FiberPoint& base, int m,
                            const FibrationConfig& cfg) {
  if (m == 0) return SampledPath{{base.z}, {0.0}};
  std::vector<Point> nodes;
  for (auto& q : flow_trajectory(f, base, -2.0 * std::numbers::pi * m, cfg))
    nodes.push_back(std::move(q.z));
  return make_path(f, std::move(nodes));
}

SampledPath concatenate(const MixedPolynomial& f, const SampledPath& a, const SampledPath& b) {
  if (a.nodes.empty()) return b;
  if (b.nodes.empty()) return a;
  const double gap = (a.nodes.back() - b.nodes.front()).norm();
  if (gap > 1e-9 * std::max(1.0, a.nodes.back().norm()))
    throw InputError("concatenated paths do not meet (gap " + std::to_string(gap) + ")");
  std::vector<Point> nodes = a.nodes;
  nodes.insert(nodes.end(), b.nodes.begin() + 1, b.nodes.end());
  return make_path(f, std::move(nodes));
}

double angle_spread(const MixedPolynomial& f, const std::vector<Point>& nodes) {
  if (nodes.empty()) return 0.0;
  const Complex v0 = evaluate(f, nodes.front());
  double spread = 0.0;
  for (const auto& z : nodes) spread = std::max(spread, std::abs(std::arg(evaluate(f, z) / v0)));
  return spread;
}

TransversalityProbe probe_transversality(const MixedPolynomial& f, const FibrationConfig& cfg,
                                         std::size_t samples, Seed seed) {
  cfg.validate();
  const int n = f.num_vars();
  TransversalityProbe probe;
  probe.min_singular_value = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = make_rng(seed, s);
    const double r = uniform(rng, cfg.r1, cfg.r0);
    const Complex eta = std::polar(cfg.delta * uniform(rng, 0.1, 1.0),
                                   uniform(rng, 0.0, 2.0 * std::numbers::pi));
    Eigen::VectorXd x(2 * n);
    for (auto& v : x) v = uniform(rng, -1.0, 1.0);
    x *= r / x.norm();
    ++probe.attempted;

    // Gauss-Newton on (Re f - Re eta, Im f - Im eta, |x|^2 - r^2) = 0.
    bool converged = false;
    Eigen::MatrixXd jac(3, 2 * n);
    for (int it = 0; it < 60; ++it) {
      const Linearization lin = linearize(f, to_complex(x));
      Eigen::Vector3d res(lin.value.real() - eta.real(), lin.value.imag() - eta.imag(),
                          x.squaredNorm() - r * r);
      jac.topRows(2) = lin.jacobian;
      jac.row(2) = 2.0 * x.transpose();
      if (std::abs(res[0]) + std::abs(res[1]) < cfg.tol_fiber && std::abs(res[2]) < 1e-12) {
        converged = true;
        break;
      }
      const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(res);
      x -= step.norm() > 0.1 * r ? Eigen::VectorXd(step * (0.1 * r / step.norm())) : step;
    }
    if (!converged) continue;
    ++probe.located;
    for (int row = 0; row < 3; ++row) {
      const double norm = jac.row(row).norm();
      if (norm > 0.0) jac.row(row) /= norm;
    }
    const double smin = Eigen::JacobiSVD<Eigen::MatrixXd>(jac).singularValues()[2];
    probe.min_singular_value = std::min(probe.min_singular_value, smin);
    if (smin > 1e-6) ++probe.transverse;
  }
  if (probe.located == 0) probe.min_singular_value = 0.0;
  return probe;
}

}  // namespace milnor

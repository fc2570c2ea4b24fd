#include "milnor/newton_polyhedron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

#include <Eigen/Cholesky>

#include "milnor/errors.hpp"
#include "milnor/jacobian.hpp"
#include "milnor/value_solver.hpp"

namespace milnor {
namespace {

constexpr int kMaxNewtonVars = 12;

Subset subset_from_mask(unsigned mask, int n) {
  Subset s;
  for (int j = 0; j < n; ++j)
    if (mask & (1u << j)) s.push_back(j);
  return s;
}

// Local coordinates on the torus: z_j = exp(rho_j + i phi_j).
Point torus_point(const Eigen::VectorXd& x) {
  Point z(x.size() / 2);
  for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = std::polar(std::exp(x[2 * j]), x[2 * j + 1]);
  return z;
}

double derivative_scale(const MixedPolynomial& g, const Point& z) {
  double s = 0.0;
  for (const auto& t : g.terms()) {
    double m = std::abs(t.coeff);
    for (int j = 0; j < g.num_vars(); ++j) m *= std::pow(std::abs(z[j]), t.nu[j] + t.mu[j]);
    for (int j = 0; j < g.num_vars(); ++j) {
      const int e = t.nu[j] + t.mu[j];
      if (e > 0) s += e * m / std::abs(z[j]);
    }
  }
  return s;
}

// Unit left singular vector of J for its smallest singular value.
Eigen::Vector2d weakest_direction(const RealJacobian& j) {
  const double a = j.row(0).squaredNorm();
  const double c = j.row(1).squaredNorm();
  const double b = j.row(0).dot(j.row(1));
  const double lmin = 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  Eigen::Vector2d u1(b, lmin - a);
  Eigen::Vector2d u2(lmin - c, b);
  Eigen::Vector2d u = u1.squaredNorm() >= u2.squaredNorm() ? u1 : u2;
  const double norm = u.norm();
  if (norm == 0.0) return {1.0, 0.0};
  return u / norm;
}

struct CriticalState {
  Point z;
  RealJacobian jac;
  double scale = 0.0;
  double residual = 0.0;
};

CriticalState critical_state(const MixedPolynomial& g, const Eigen::VectorXd& x) {
  CriticalState s;
  s.z = torus_point(x);
  s.jac = wirtinger_jacobian(g, s.z);
  s.scale = derivative_scale(g, s.z);
  const double smin = singular_values(s.jac)[1];
  s.residual = s.scale > 0.0 ? smin / s.scale : (smin == 0.0 ? 0.0 : 1.0);
  return s;
}

// Levenberg-Marquardt on R(x) = u^T J(z(x)) / S(z(x)), u frozen per iteration.
// R vanishes exactly where J has a null left vector u, i.e. rank J < 2.
CriticalState local_critical_search(const MixedPolynomial& g, Eigen::VectorXd x, double tol,
                                    const CriticalSearchOptions& opt) {
  const double rho_lo = std::log(opt.min_modulus);
  const double rho_hi = std::log(opt.max_modulus);
  auto clamp = [&](Eigen::VectorXd& v) {
    for (Eigen::Index j = 0; j < v.size(); j += 2) v[j] = std::clamp(v[j], rho_lo, rho_hi);
  };
  auto reduced = [&](const Eigen::VectorXd& at, const Eigen::Vector2d& u) -> Eigen::VectorXd {
    const Point z = torus_point(at);
    const double s = derivative_scale(g, z);
    Eigen::VectorXd r = (u.transpose() * wirtinger_jacobian(g, z)).transpose();
    return s > 0.0 ? Eigen::VectorXd(r / s) : r;
  };

  CriticalState cur = critical_state(g, x);
  double lambda = 1e-3;
  double last_progress = cur.residual;
  int stalled = 0;
  const Eigen::Index dim = x.size();
  for (int it = 0; it < opt.max_iter && cur.residual >= tol; ++it) {
    const Eigen::Vector2d u = weakest_direction(cur.jac);
    const Eigen::VectorXd r0 = reduced(x, u);
    Eigen::MatrixXd d(dim, dim);
    constexpr double h = 1e-7;
    for (Eigen::Index k = 0; k < dim; ++k) {
      Eigen::VectorXd xh = x;
      xh[k] += h;
      d.col(k) = (reduced(xh, u) - r0) / h;
    }
    const Eigen::MatrixXd dtd = d.transpose() * d;
    const Eigen::VectorXd grad = d.transpose() * r0;
    bool improved = false;
    for (int attempt = 0; attempt < 12 && !improved; ++attempt) {
      Eigen::MatrixXd lhs = dtd;
      lhs.diagonal().array() += lambda * (1.0 + dtd.diagonal().array());
      Eigen::VectorXd trial = x - lhs.ldlt().solve(grad);
      clamp(trial);
      if (!trial.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      CriticalState next = critical_state(g, trial);
      if (next.residual < cur.residual) {
        x = std::move(trial);
        cur = std::move(next);
        lambda = std::max(lambda / 5.0, 1e-12);
        improved = true;
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) break;
    if (cur.residual < 0.999 * last_progress) {
      last_progress = cur.residual;
      stalled = 0;
    } else if (++stalled >= 6) {
      break;
    }
  }
  return cur;
}

}  // namespace

WeightVector::WeightVector(std::vector<int> weights) : p(std::move(weights)) {
  if (p.empty()) throw InputError("empty weight vector");
  if (std::any_of(p.begin(), p.end(), [](int w) { return w < 0; }))
    throw InputError("weights must be non-negative");
  if (std::all_of(p.begin(), p.end(), [](int w) { return w == 0; }))
    throw InputError("weight vector must not be all zero");
}

Subset WeightVector::zero_set() const {
  Subset s;
  for (int j = 0; j < size(); ++j)
    if (p[j] == 0) s.push_back(j);
  return s;
}

int WeightVector::degree(const MixedTerm& t) const {
  int d = 0;
  for (int j = 0; j < size(); ++j) d += p[j] * (t.nu[j] + t.mu[j]);
  return d;
}

const char* to_string(Verdict v) noexcept {
  return v == Verdict::witness_found ? "witness_found" : "no_witness";
}

NewtonData newton_data(const MixedPolynomial& f) {
  if (f.is_zero()) throw InputError("Newton data of the zero polynomial");
  const int n = f.num_vars();
  if (n > kMaxNewtonVars)
    throw InputError("Newton data limited to n <= 12 (got " + std::to_string(n) + ")");

  NewtonData data;
  std::set<Exponent> support;
  for (const auto& t : f.terms()) support.insert(t.radial_exponent());
  data.radial_support.assign(support.begin(), support.end());

  data.convenient = true;
  for (int i = 0; i < n && data.convenient; ++i) {
    data.convenient = std::any_of(support.begin(), support.end(), [&](const Exponent& e) {
      for (int j = 0; j < n; ++j)
        if ((j == i) != (e[j] > 0)) return false;
      return true;
    });
  }

  // f^I vanishes iff no monomial is supported inside I.
  std::vector<unsigned> masks;
  for (const auto& e : support) {
    unsigned m = 0;
    for (int j = 0; j < n; ++j)
      if (e[j] > 0) m |= 1u << j;
    masks.push_back(m);
  }
  std::vector<Subset> vanishing, non_vanishing;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const bool hit = std::any_of(masks.begin(), masks.end(),
                                 [&](unsigned m) { return (m & ~mask) == 0; });
    (hit ? non_vanishing : vanishing).push_back(subset_from_mask(mask, n));
  }
  auto by_size = [](const Subset& a, const Subset& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  };
  std::sort(vanishing.begin(), vanishing.end(), by_size);
  std::sort(non_vanishing.begin(), non_vanishing.end(), by_size);
  data.vanishing_subspaces = std::move(vanishing);
  data.non_vanishing_subspaces = std::move(non_vanishing);
  return data;
}

MixedPolynomial face_function(const MixedPolynomial& f, const WeightVector& weights) {
  if (f.is_zero()) throw InputError("face function of the zero polynomial");
  if (weights.size() != f.num_vars()) throw InputError("weight vector length differs from n");
  int dmin = std::numeric_limits<int>::max();
  for (const auto& t : f.terms()) dmin = std::min(dmin, weights.degree(t));
  std::vector<MixedTerm> face;
  for (const auto& t : f.terms())
    if (weights.degree(t) == dmin) face.push_back(t);
  return MixedPolynomial(f.num_vars(), std::move(face));
}

double criticality_residual(const MixedPolynomial& g, const Point& z) {
  const double smin = singular_values(wirtinger_jacobian(g, z))[1];
  const double s = derivative_scale(g, z);
  return s > 0.0 ? smin / s : (smin == 0.0 ? 0.0 : 1.0);
}

DegeneracyReport nondegeneracy_search(const MixedPolynomial& f, const WeightVector& weights,
                                      std::size_t trials, Seed seed, double tol,
                                      const CriticalSearchOptions& options) {
  const MixedPolynomial g = face_function(f, weights);
  if (g.is_zero()) throw InputError("face function is zero");
  const int n = g.num_vars();
  const double rho_lo = std::log(options.min_modulus);
  const double rho_hi = std::log(options.max_modulus);

  DegeneracyReport report;
  report.face = weights;
  report.residual = std::numeric_limits<double>::infinity();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    auto rng = make_rng(seed, trial);
    Eigen::VectorXd x(2 * n);
    for (int j = 0; j < n; ++j) {
      x[2 * j] = uniform(rng, rho_lo, rho_hi);
      x[2 * j + 1] = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    }
    const CriticalState found = local_critical_search(g, std::move(x), tol, options);
    report.trials = trial + 1;
    report.residual = std::min(report.residual, found.residual);
    if (found.residual < tol) {
      report.verdict = Verdict::witness_found;
      report.witness = found.z;
      report.residual = found.residual;
      return report;
    }
  }
  return report;
}

std::vector<WeightVector> tameness_weights(int n, const Subset& subset, int bound) {
  check_subset(subset, n);
  if (bound < 1) throw InputError("weight bound must be >= 1");
  const Subset free_vars = complement(subset, n);
  if (free_vars.empty()) throw InputError("vanishing subspace is the whole space");
  std::vector<WeightVector> out;
  std::vector<int> p(n, 0);
  for (int j : free_vars) p[j] = 1;
  while (true) {
    int g = 0;
    for (int j : free_vars) g = std::gcd(g, p[j]);
    if (g == 1) out.emplace_back(p);
    // odometer over the free coordinates
    std::size_t k = 0;
    while (k < free_vars.size() && p[free_vars[k]] == bound) p[free_vars[k++]] = 1;
    if (k == free_vars.size()) break;
    ++p[free_vars[k]];
  }
  return out;
}

std::vector<DegeneracyReport> tameness_search(const MixedPolynomial& f, const Subset& subset,
                                              double epsilon, std::size_t trials, Seed seed,
                                              const TamenessOptions& options) {
  if (!(epsilon > 0.0)) throw InputError("tameness radius epsilon must be positive");
  const NewtonData data = newton_data(f);
  if (std::find(data.vanishing_subspaces.begin(), data.vanishing_subspaces.end(), subset) ==
      data.vanishing_subspaces.end())
    throw InputError("not a vanishing coordinate subspace");

  const int n = f.num_vars();
  const Subset free_vars = complement(subset, n);
  std::vector<DegeneracyReport> reports;
  const auto weights = tameness_weights(n, subset, options.weight_bound);
  std::uint64_t stream = 0;
  for (const auto& weight : weights) {
    const MixedPolynomial face = face_function(f, weight);
    std::vector<int> free_weights;
    for (int j : free_vars) free_weights.push_back(weight.p[j]);
    for (std::size_t s = 0; s < options.samples_per_face; ++s, ++stream) {
      auto rng = make_rng(seed, stream);
      // Point of (C*)^I with sum |z_i|^2 <= epsilon: random phases, random
      // radius fractions normalized, then scaled inside the epsilon ball.
      Point fixed(subset.size());
      double norm2 = 0.0;
      for (auto& c : fixed) {
        c = std::polar(uniform(rng, 0.1, 1.0), uniform(rng, 0.0, 2.0 * std::numbers::pi));
        norm2 += std::norm(c);
      }
      fixed *= std::sqrt(epsilon / norm2) * uniform(rng, 0.1, 1.0);

      const MixedPolynomial g = substitute(face, subset, fixed);
      DegeneracyReport rep;
      if (g.is_zero()) {
        // f_P vanishes identically in the free variables: rank 0 everywhere.
        rep.face = weight;
        rep.verdict = Verdict::witness_found;
        rep.trials = 1;
        rep.residual = 0.0;
        rep.witness = embed(fixed, subset, n) + embed(Point::Ones(free_vars.size()), free_vars, n);
      } else {
        rep = nondegeneracy_search(g, WeightVector(free_weights), trials, mix_seed(seed, stream),
                                   options.tol);
        rep.face = weight;
        if (rep.witness) rep.witness = embed(fixed, subset, n) + embed(*rep.witness, free_vars, n);
      }
      reports.push_back(std::move(rep));
    }
  }
  return reports;
}

std::vector<VsharpProbe> probe_vsharp(const MixedPolynomial& f, double radius,
                                      std::size_t attempts, Seed seed) {
  const NewtonData data = newton_data(f);
  const int n = f.num_vars();
  std::vector<VsharpProbe> out;
  std::uint64_t stream = 0;
  for (const auto& subset : data.non_vanishing_subspaces) {
    VsharpProbe probe{subset, std::nullopt};
    const MixedPolynomial g = restrict_to_subspace(f, subset);
    SolveOptions opt;
    opt.tol = 1e-12;
    opt.ball_radius = radius;
    opt.max_step = 0.25 * radius;
    for (std::size_t a = 0; a < attempts && !probe.point; ++a, ++stream) {
      auto rng = make_rng(seed, stream);
      Point seed_point(subset.size());
      for (auto& c : seed_point)
        c = std::polar(uniform(rng, 0.05, 0.5) * radius / std::sqrt(double(subset.size())),
                       uniform(rng, 0.0, 2.0 * std::numbers::pi));
      try {
        const SolveResult r = solve_for_value(g, 0.0, seed_point, opt);
        const bool on_torus = (r.z.array().abs() > 1e-9 * radius).all();
        const Point full = embed(r.z, subset, n);
        if (on_torus && is_mixed_regular_point(f, full)) probe.point = full;
      } catch (const NumericalError&) {
      }
    }
    out.push_back(std::move(probe));
  }
  return out;
}

}  // namespace milnor

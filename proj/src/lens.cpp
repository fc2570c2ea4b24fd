#include "milnor/lens.hpp"

#include <algorithm>
#include <cmath>

#include "milnor/errors.hpp"
#include "milnor/internal/powers.hpp"
#include "milnor/value_solver.hpp"

namespace milnor {

using internal::ipow;

namespace {

constexpr double kPhiTol = 1e-8;
constexpr double kPoleTol = 1e-10;

MixedTerm term1(Complex c, int nu, int mu) { return {c, {nu}, {mu}}; }

MixedTerm term2(Complex c, int nz, int mz, int nw, int mw) { return {c, {nz, nw}, {mz, mw}}; }

}  // namespace

void LensConfig::validate() const {
  if (n < 2) throw InputError("lens family needs n >= 2");
  if (!(a > 0.0 && a < 0.5)) throw InputError("lens parameter a must lie in (0, 1/2)");
  if (!(epsilon > 0.0 && epsilon < a / 10.0))
    throw InputError("lens parameter eps must lie in (0, a/10)");
  if (grid < 2) throw InputError("lens grid must be >= 2");
  if (!(dedup_radius > 0.0)) throw InputError("dedup radius must be positive");
  if (!(half_width > 0.0)) throw InputError("search half-width must be positive");
}

double default_lens_epsilon(int n) {
  if (n < 2) throw InputError("lens family needs n >= 2");
  return std::pow(10.0, -n);
}

MixedPolynomial rhie_numerator(const LensConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  const double big_a = std::pow(cfg.a, n - 1);
  return MixedPolynomial(1, {
                                term1(1.0, n, 1),
                                term1(-big_a, 1, 1),
                                term1(-(1.0 + cfg.epsilon), n - 1, 0),
                                term1(cfg.epsilon * big_a, 0, 0),
                            });
}

MixedPolynomial rhie_homogenized(const LensConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  const double big_a = std::pow(cfg.a, n - 1);
  // Exponents (nu_z, mu_z, nu_w, mu_w); each term has radial degree n + 1.
  return MixedPolynomial(2, {
                                term2(1.0, n, 1, 0, 0),
                                term2(-big_a, 1, 1, n - 1, 0),
                                term2(-(1.0 + cfg.epsilon), n - 1, 0, 1, 1),
                                term2(cfg.epsilon * big_a, 0, 0, n, 1),
                            });
}

Complex rhie_phi(const LensConfig& cfg, Complex z) {
  const int n = cfg.n;
  const double big_a = std::pow(cfg.a, n - 1);
  return std::conj(z) - ipow(z, n - 2) / (ipow(z, n - 1) - big_a) - cfg.epsilon / z;
}

std::vector<LensRoot> lens_roots(const LensConfig& cfg) {
  const MixedPolynomial g = rhie_numerator(cfg);
  const double big_a = std::pow(cfg.a, cfg.n - 1);

  SolveOptions opt;
  opt.tol = 1e-14;
  opt.max_iter = 60;
  opt.ball_radius = 4.0 * cfg.half_width;
  opt.max_step = 0.25 * cfg.half_width;
  opt.polish_steps = 4;

  std::vector<LensRoot> found;
  const double h = 2.0 * cfg.half_width / (cfg.grid - 1);
  for (int i = 0; i < cfg.grid; ++i) {
    for (int j = 0; j < cfg.grid; ++j) {
      Point seed(1);
      seed[0] = Complex(-cfg.half_width + i * h, -cfg.half_width + j * h);
      SolveResult r;
      try {
        r = solve_for_value(g, 0.0, seed, opt);
      } catch (const NumericalError&) {
        continue;
      }
      const Complex z = r.z[0];
      if (std::abs(z) < kPoleTol || std::abs(ipow(z, cfg.n - 1) - big_a) < kPoleTol) continue;
      const double residual = std::abs(rhie_phi(cfg, z));
      if (!(residual < kPhiTol)) continue;
      found.push_back({z, residual});
    }
  }
  std::sort(found.begin(), found.end(), [](const LensRoot& x, const LensRoot& y) {
    if (x.z.real() != y.z.real()) return x.z.real() < y.z.real();
    return x.z.imag() < y.z.imag();
  });
  std::vector<LensRoot> roots;
  for (const auto& r : found) {
    auto near = std::find_if(roots.begin(), roots.end(), [&](const LensRoot& q) {
      return std::abs(q.z - r.z) < cfg.dedup_radius;
    });
    if (near == roots.end()) {
      roots.push_back(r);
    } else if (r.residual < near->residual) {
      *near = r;
    }
  }
  return roots;
}

int expected_root_count(int n) { return 5 * n - 5; }

EpsilonThreshold epsilon_threshold(const LensConfig& cfg, double floor, int bisections) {
  cfg.validate();
  if (!(floor > 0.0)) throw InputError("epsilon floor must be positive");
  const int expected = expected_root_count(cfg.n);
  EpsilonThreshold out;
  auto count_at = [&](double eps) {
    LensConfig c = cfg;
    c.epsilon = eps;
    const int k = static_cast<int>(lens_roots(c).size());
    out.evaluations.emplace_back(eps, k);
    return k;
  };

  // Just below the admissible bound a / 10, then one value per decade.
  std::vector<double> scan{0.999 * cfg.a / 10.0};
  for (double e = std::pow(10.0, std::floor(std::log10(cfg.a / 10.0))); e >= floor; e /= 10.0)
    if (e < scan.back()) scan.push_back(e);

  std::optional<double> above;
  for (double e : scan) {
    if (count_at(e) == expected) {
      out.matching = e;
      out.failing = above;
      break;
    }
    above = e;
  }
  if (!out.matching || !out.failing) return out;

  double lo = std::log(*out.matching), hi = std::log(*out.failing);
  for (int b = 0; b < bisections; ++b) {
    const double mid = 0.5 * (lo + hi);
    if (count_at(std::exp(mid)) == expected) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.matching = std::exp(lo);
  out.failing = std::exp(hi);
  return out;
}

}  // namespace milnor

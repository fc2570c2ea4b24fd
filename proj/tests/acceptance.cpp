// Acceptance checks: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "milnor/connectivity.hpp"
#include "milnor/errors.hpp"
#include "milnor/expression.hpp"
#include "milnor/fibration.hpp"
#include "milnor/jacobian.hpp"
#include "milnor/lens.hpp"
#include "milnor/newton_polyhedron.hpp"
#include "milnor/seeding.hpp"
#include "milnor/value_solver.hpp"

using namespace milnor;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Seed kSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

int euclid(int a, int b) {
  while (b != 0) {
    const int r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Point random_point(std::mt19937_64& rng, int n, double r) {
  Point z(n);
  for (int j = 0; j < n; ++j) z[j] = Complex(uniform(rng, -r, r), uniform(rng, -r, r));
  return z;
}

Outcome components_case(const char* text, std::size_t want, const char* branch_of) {
  const auto f = parse_mixed_expression(text);
  FibrationConfig cfg;
  cfg.delta = 1e-3;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = component_report(f, cfg, 200, 800, kSeed);
  const double secs = since(t0);
  const bool evidence = validate_evidence(f, cfg, r);
  std::string detail = "component_count=" + std::to_string(r.component_count) + " want " +
                       std::to_string(want) + ", evidence " + (evidence ? "valid" : "INVALID");
  bool pass = r.component_count == want && evidence && secs < 60.0;
  if (branch_of != nullptr) {
    const auto g = parse_mixed_expression(branch_of);
    const auto b = branch_clusters(g, r.points, static_cast<int>(want));
    bool consistent = true;
    for (const auto& e : r.edges) consistent = consistent && b.labels[e.a] == b.labels[e.b];
    detail += ", arg g classes=" + std::to_string(b.class_count) + fmt(" (max dev %.1e rad)", b.max_deviation) +
              (consistent ? ", edges within classes" : ", EDGE ACROSS CLASSES");
    pass = pass && b.class_count == want && b.max_deviation < 1e-6 && consistent;
  }
  detail += fmt(", %.1f s of 60", secs);
  return {pass, detail};
}

Outcome cyclic_cover_case() {
  const auto t0 = std::chrono::steady_clock::now();
  auto rng = make_rng(kSeed, 3);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> m(1 + rng() % 4);
    for (auto& v : m) v = 1 + static_cast<int>(rng() % 30);
    if (cyclic_cover_components(m) != std::accumulate(m.begin(), m.end(), 0, euclid)) ++mismatches;
  }
  const bool examples = cyclic_cover_components(std::vector<int>{6, 10, 15}) == 1 &&
                        cyclic_cover_components(std::vector<int>{4, 6}) == 2;
  const double secs = since(t0);
  return {mismatches == 0 && examples && secs < 1.0,
          std::to_string(mismatches) + " mismatches in 1000 tuples, (6,10,15)->1 and (4,6)->2 " +
              (examples ? "ok" : "WRONG") + fmt(", %.3f s of 1", secs)};
}

Outcome lens_case() {
  bool pass = true;
  std::string detail;
  for (int n : {2, 3, 4}) {
    LensConfig cfg;
    cfg.n = n;
    cfg.a = 0.3;
    cfg.epsilon = std::pow(10.0, -n);
    const auto t0 = std::chrono::steady_clock::now();
    const auto count = lens_roots(cfg).size();
    LensConfig twice = cfg;
    twice.grid *= 2;
    const auto doubled = lens_roots(twice).size();
    const double secs = since(t0);
    const auto want = static_cast<std::size_t>(expected_root_count(n));
    const bool ok = count == want && doubled == count && secs < 30.0;
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += "n=" + std::to_string(n) + ": " + std::to_string(count) + " roots (want " +
              std::to_string(want) + ", doubled grid " + std::to_string(doubled) + fmt(", %.1f s)", secs);
  }
  return {pass, detail};
}

Outcome monodromy_case() {
  const char* polys[] = {"z1*z2", "z1^2 + z2^3", "z1*zb1 + z2^2 + (0.2)*z1^2"};
  FibrationConfig cfg;
  auto rng = make_rng(kSeed, 5);
  double group = 0.0, inverse = 0.0, drift = 0.0;
  int done = 0, replaced = 0;
  std::uint64_t sample_seed = 0;
  while (done < 20) {
    const auto f = parse_mixed_expression(polys[done % 3]);
    const auto p = sample_fiber(f, cfg, 2, mix_seed(kSeed, sample_seed++)).front();
    const double theta = uniform(rng, -kPi, kPi), xi = uniform(rng, -kPi, kPi);
    try {
      const auto a = flow_monodromy(f, flow_monodromy(f, p, theta, cfg), xi, cfg);
      const auto b = flow_monodromy(f, p, theta + xi, cfg);
      const auto back = flow_monodromy(f, flow_monodromy(f, p, theta, cfg), -theta, cfg);
      for (const auto& q : flow_trajectory(f, p, theta + xi, cfg))
        drift = std::max(drift, std::abs(std::abs(evaluate(f, q.z)) - cfg.delta));
      group = std::max(group, (a.z - b.z).norm());
      inverse = std::max(inverse, (back.z - p.z).norm());
      ++done;
    } catch (const NumericalError&) {
      // The flow left the ball or met a critical point; draw another start.
      ++replaced;
    }
  }
  const bool pass = group <= 1e-5 && inverse <= 1e-6 && drift <= 1e-8;
  return {pass, "20 instances (" + std::to_string(replaced) + " starts redrawn)" +
                    fmt(": group law %.1e", group) + fmt(" <= 1e-5, inverse %.1e", inverse) +
                    fmt(" <= 1e-6, |f| drift %.1e <= 1e-8", drift)};
}

Outcome deformation_case() {
  const auto f = parse_mixed_expression("z1*z2");
  FibrationConfig cfg;
  const auto pts = sample_fiber(f, cfg, 60, kSeed);
  int successes = 0, tried = 0;
  double spread = 0.0, endpoint = 0.0;
  for (std::size_t k = 0; successes < 50 && k < 4 * pts.size(); ++k) {
    const std::size_t i = k % pts.size(), j = (7 * k + 1) % pts.size();
    if (i == j) continue;
    ConnectOptions opt;
    opt.seed = mix_seed(kSeed, k);
    ++tried;
    const auto path = connect_attempt(f, cfg, pts[i], pts[j], opt);
    if (!path) continue;
    ++successes;
    spread = std::max(spread, angle_spread(f, path->nodes));
    endpoint = std::max({endpoint, (path->nodes.front() - pts[i].z).norm(),
                         (path->nodes.back() - pts[j].z).norm()});
  }
  const bool pass = successes == 50 && spread <= 1e-6 && endpoint <= 1e-8;
  return {pass, std::to_string(successes) + " successes in " + std::to_string(tried) +
                    fmt(" attempts: max |arg f - arg f(start)| %.1e", spread) +
                    fmt(" <= 1e-6, endpoint error %.1e <= 1e-8", endpoint)};
}

// Closed loop through p on the tube: coordinate j turns k_j times and is
// scaled by 1 + sin(pi t) u_j with |u_j| <= 0.3, so it never passes through 0
// and winds exactly k_j times. Interior nodes are pushed onto |f| = delta.
std::optional<SampledPath> random_loop(const MixedPolynomial& f, const FiberPoint& p,
                                       const std::vector<int>& turns, const Point& bump,
                                       const FibrationConfig& cfg) {
  SolveOptions solve;
  solve.tol = cfg.tol_fiber;
  solve.ball_radius = cfg.r0;
  solve.max_step = 0.1 * cfg.r0;
  const int nodes = 800;
  std::vector<Point> pts;
  for (int k = 0; k <= nodes; ++k) {
    const double t = static_cast<double>(k) / nodes;
    if (k == 0 || k == nodes) {
      pts.push_back(p.z);
      continue;
    }
    Point z = p.z;
    for (Eigen::Index j = 0; j < z.size(); ++j)
      z[j] *= std::polar(1.0, 2 * kPi * turns[j] * t) * (1.0 + std::sin(kPi * t) * bump[j]);
    const Complex v = evaluate(f, z);
    try {
      pts.push_back(solve_for_value(f, cfg.delta * v / std::abs(v), z, solve).z);
    } catch (const NumericalError&) {
      return std::nullopt;
    }
  }
  return make_path(f, pts);
}

Outcome winding_case() {
  struct Case {
    const char* text;
    std::vector<int> exponents;  // empty: not a monomial
  };
  const Case cases[] = {{"z1*z2", {1, 1}}, {"z1^2*z2^3", {2, 3}}, {"z1^2 + z2^3", {}},
                        {"z1*zb1 + z2^2 + (0.2)*z1^2", {}}};
  FibrationConfig cfg;
  auto rng = make_rng(kSeed, 7);
  int loops = 0, redrawn = 0, formula_mismatch = 0, composed_nonzero = 0;
  std::uint64_t draw = 0;
  while (loops < 100) {
    const Case& c = cases[loops % 4];
    const auto f = parse_mixed_expression(c.text);
    const auto p = sample_fiber(f, cfg, 2, mix_seed(kSeed, 1000 + draw++)).front();
    std::vector<int> turns{static_cast<int>(rng() % 3) - 1, static_cast<int>(rng() % 3) - 1};
    Point bump(2);
    for (auto& u : bump) u = std::polar(uniform(rng, 0.0, 0.3), uniform(rng, -kPi, kPi));
    try {
      const auto loop = random_loop(f, p, turns, bump, cfg);
      if (!loop) {
        ++redrawn;
        continue;
      }
      const int m = rotation_number(f, *loop, cfg.tol_angle);
      if (!c.exponents.empty() && m != c.exponents[0] * turns[0] + c.exponents[1] * turns[1])
        ++formula_mismatch;
      const auto closed = concatenate(f, *loop, correcting_loop(f, p, m, cfg));
      if (rotation_number(f, closed, cfg.tol_angle) != 0) ++composed_nonzero;
      ++loops;
    } catch (const NumericalError& e) {
      if (e.kind() == FailureKind::non_integral_winding) throw;
      ++redrawn;
    }
  }
  const bool pass = formula_mismatch == 0 && composed_nonzero == 0;
  return {pass, "100 loops integral (" + std::to_string(redrawn) + " redrawn), " +
                    std::to_string(formula_mismatch) + " monomial formula mismatches, " +
                    std::to_string(composed_nonzero) + " nonzero after correcting loop"};
}

Outcome wirtinger_case() {
  auto rng = make_rng(kSeed, 8);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    std::vector<MixedTerm> terms;
    for (int k = 0; k < 5; ++k) {
      MixedTerm t{Complex(uniform(rng, -2, 2), uniform(rng, -2, 2)), Exponent(n), Exponent(n)};
      for (int j = 0; j < n; ++j) {
        t.nu[j] = static_cast<int>(rng() % 4);
        t.mu[j] = static_cast<int>(rng() % 4);
      }
      terms.push_back(t);
    }
    const MixedPolynomial f(n, terms);
    const Point z = random_point(rng, n, 1.0);
    const RealJacobian exact = wirtinger_jacobian(f, z);
    RealJacobian fd(2, 2 * n);
    const double h = 1e-6;
    for (int j = 0; j < n; ++j) {
      for (int part = 0; part < 2; ++part) {
        Point plus = z, minus = z;
        const Complex step = part == 0 ? Complex(h, 0) : Complex(0, h);
        plus[j] += step;
        minus[j] -= step;
        const Complex d = (evaluate(f, plus) - evaluate(f, minus)) / (2.0 * h);
        fd(0, 2 * j + part) = d.real();
        fd(1, 2 * j + part) = d.imag();
      }
    }
    worst = std::max(worst, (exact - fd).norm() / std::max(1.0, exact.norm()));
  }
  return {worst <= 1e-6, fmt("100 pairs, worst relative difference %.1e <= 1e-6", worst)};
}

// Symbolic oracle for a binary quadratic form a z1^2 + b z1 z2 + c z2^2: it
// has a critical point on the torus iff its matrix is singular with a kernel
// vector of nonzero entries.
Verdict quadratic_oracle(Complex a, Complex b, Complex c) {
  const Complex det = a * c - b * b / 4.0;
  if (std::abs(det) > 1e-14) return Verdict::no_witness;
  // Kernel of [[a, b/2], [b/2, c]]: (b/2, -a) or (c, -b/2).
  const Complex u0 = std::abs(a) + std::abs(b) > 0 ? b / 2.0 : c;
  const Complex u1 = std::abs(a) + std::abs(b) > 0 ? -a : -b / 2.0;
  return std::abs(u0) > 0 && std::abs(u1) > 0 ? Verdict::witness_found : Verdict::no_witness;
}

Outcome degeneracy_case() {
  const WeightVector face({1, 1});
  const auto square = nondegeneracy_search(parse_mixed_expression("z1^2 + 2*z1*z2 + z2^2"), face, 10000, kSeed);
  const auto sum = nondegeneracy_search(parse_mixed_expression("z1^2 + z2^2"), face, 10000, kSeed);
  const Verdict square_oracle = quadratic_oracle(1.0, 2.0, 1.0);
  const Verdict sum_oracle = quadratic_oracle(1.0, 0.0, 1.0);
  const bool pass = square.verdict == Verdict::witness_found && square_oracle == Verdict::witness_found &&
                    sum.verdict == Verdict::no_witness && sum_oracle == Verdict::no_witness &&
                    sum.trials == 10000;
  return {pass, std::string("(z1+z2)^2: ") + to_string(square.verdict) + " (oracle " +
                    to_string(square_oracle) + "); z1^2+z2^2: " + to_string(sum.verdict) + " after " +
                    std::to_string(sum.trials) + " trials (oracle " + to_string(sum_oracle) + ")"};
}

}  // namespace

int main() {
  report(1, "components z1^2*z2^3", [] { return components_case("z1^2*z2^3", 1, nullptr); });
  report(2, "components z1^2*z2^4", [] { return components_case("z1^2*z2^4", 2, "z1*z2^2"); });
  report(3, "cyclic cover model", cyclic_cover_case);
  report(4, "lens root counts", lens_case);
  report(5, "monodromy laws", monodromy_case);
  report(6, "path deformation", deformation_case);
  report(7, "winding integrality", winding_case);
  report(8, "Wirtinger Jacobians", wirtinger_case);
  report(9, "degeneracy detection", degeneracy_case);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

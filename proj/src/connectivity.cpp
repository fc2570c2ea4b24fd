#include "milnor/connectivity.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <utility>

#include "milnor/errors.hpp"
#include "milnor/union_find.hpp"
#include "milnor/value_solver.hpp"

namespace milnor {
namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                           41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

// Scrambled Halton point of the cube mapped radially onto the ball of radius R.
Point ball_seed(std::uint64_t index, const std::vector<double>& shift, double radius) {
  const auto dim = static_cast<Eigen::Index>(shift.size());
  Eigen::VectorXd v(dim);
  for (Eigen::Index d = 0; d < dim; ++d) {
    double u = radical_inverse(index, kPrimes[d]) + shift[d];
    u -= std::floor(u);
    v[d] = 2.0 * u - 1.0;
  }
  const double l2 = v.norm();
  if (l2 == 0.0) return Point::Zero(dim / 2);
  return to_complex(v * (radius * v.cwiseAbs().maxCoeff() / l2));
}

// Nodes of `curve` (s in [0, 1]) pushed along the radial f-direction onto
// |f| = delta; the two ends are kept as given. Nodes are inserted until
// consecutive nodes are within max_gap and arg f moves by at most max_increment.
std::optional<std::vector<Point>> trace_ambient(const MixedPolynomial& f, const FibrationConfig& cfg,
                                                const std::function<Point(double)>& curve,
                                                double length, const ConnectOptions& opt,
                                                std::string& failure) {
  SolveOptions solve;
  solve.tol = cfg.tol_fiber;
  solve.max_iter = cfg.max_newton_iter;
  solve.ball_radius = cfg.r0;
  solve.max_step = 0.1 * cfg.r0;
  auto push_to_tube = [&](const Point& x) -> std::optional<Point> {
    const Complex v = evaluate(f, x);
    if (std::abs(v) < 1e-300) return std::nullopt;
    try {
      return solve_for_value(f, cfg.delta * v / std::abs(v), x, solve).z;
    } catch (const NumericalError&) {
      return std::nullopt;
    }
  };

  struct Node {
    double s;
    Point z;
    Complex value;
  };
  std::vector<Node> nodes;
  const auto intervals = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(length / (opt.node_spacing * cfg.r0))));
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(intervals);
    Point z;
    if (k == 0 || k == intervals) {
      z = curve(s);
    } else {
      auto pushed = push_to_tube(curve(s));
      if (!pushed) {
        failure = "radial projection failed";
        return std::nullopt;
      }
      z = std::move(*pushed);
    }
    const Complex v = evaluate(f, z);
    nodes.push_back({s, std::move(z), v});
  }

  const double gap = opt.max_gap * cfg.r0;
  for (std::size_t i = 0; i + 1 < nodes.size();) {
    const bool too_far = (nodes[i + 1].z - nodes[i].z).norm() > gap;
    const bool too_steep = std::abs(std::arg(nodes[i + 1].value / nodes[i].value)) > opt.max_increment;
    if (!too_far && !too_steep) {
      ++i;
      continue;
    }
    if (nodes.size() >= opt.max_nodes || nodes[i + 1].s - nodes[i].s < 1e-12) {
      failure = "ambient path refinement exhausted";
      return std::nullopt;
    }
    const double s = 0.5 * (nodes[i].s + nodes[i + 1].s);
    auto pushed = push_to_tube(curve(s));
    if (!pushed) {
      failure = "radial projection failed";
      return std::nullopt;
    }
    const Complex v = evaluate(f, *pushed);
    nodes.insert(nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1, Node{s, std::move(*pushed), v});
  }
  std::vector<Point> out;
  out.reserve(nodes.size());
  for (auto& n : nodes) out.push_back(std::move(n.z));
  return out;
}

// Polyline through `vertices`.
std::optional<std::vector<Point>> ambient_path(const MixedPolynomial& f, const FibrationConfig& cfg,
                                               const std::vector<Point>& vertices,
                                               const ConnectOptions& opt, std::string& failure) {
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < vertices.size(); ++i)
    cumulative.push_back(cumulative.back() + (vertices[i] - vertices[i - 1]).norm());
  const double total = cumulative.back();
  auto curve = [&](double t) -> Point {
    if (t <= 0.0) return vertices.front();
    if (t >= 1.0) return vertices.back();
    const double s = t * total;
    std::size_t seg = 1;
    while (seg + 1 < vertices.size() && cumulative[seg] < s) ++seg;
    const double len = cumulative[seg] - cumulative[seg - 1];
    const double u = len > 0.0 ? (s - cumulative[seg - 1]) / len : 0.0;
    return vertices[seg - 1] + u * (vertices[seg] - vertices[seg - 1]);
  };
  return trace_ambient(f, cfg, curve, total, opt, failure);
}

// Loop at p in dE turning the j-th coordinate once around 0.
std::optional<SampledPath> coordinate_loop(const MixedPolynomial& f, const FibrationConfig& cfg,
                                           const Point& p, Eigen::Index j,
                                           const ConnectOptions& opt) {
  const double r = std::abs(p[j]);
  if (r < 1e-12) return std::nullopt;
  auto curve = [&](double t) -> Point {
    Point z = p;
    if (t > 0.0 && t < 1.0) z[j] *= std::polar(1.0, 2.0 * std::numbers::pi * t);
    return z;
  };
  std::string ignored;
  auto nodes = trace_ambient(f, cfg, curve, 2.0 * std::numbers::pi * r, opt, ignored);
  if (!nodes) return std::nullopt;
  try {
    return make_path(f, std::move(*nodes), opt.max_increment);
  } catch (const NumericalError&) {
    return std::nullopt;
  }
}

// Integer c with sum_j c_j w_j = target and least cost sum_j |c_j| |w_j|,
// searched over sum_j |c_j| <= max_l1.
std::optional<std::vector<int>> bezout_combination(const std::vector<int>& w, int target, int max_l1) {
  int g = 0;
  for (int v : w) g = std::gcd(g, v);
  if (g == 0 || target % g != 0) return std::nullopt;
  std::optional<std::vector<int>> best;
  long best_cost = std::numeric_limits<long>::max();
  std::vector<int> c(w.size(), 0);
  std::function<void(std::size_t, int, long, long)> search = [&](std::size_t j, int budget, long sum,
                                                                 long cost) {
    if (cost >= best_cost) return;
    if (j == w.size()) {
      if (sum == target) {
        best = c;
        best_cost = cost;
      }
      return;
    }
    for (int v = -budget; v <= budget; ++v) {
      if (v != 0 && w[j] == 0) continue;
      c[j] = v;
      search(j + 1, budget - std::abs(v), sum + static_cast<long>(v) * w[j],
             cost + static_cast<long>(std::abs(v)) * std::abs(w[j]));
    }
    c[j] = 0;
  };
  search(0, max_l1, 0, 0);
  return best;
}

SampledPath reversed(const MixedPolynomial& f, const SampledPath& path) {
  std::vector<Point> nodes(path.nodes.rbegin(), path.nodes.rend());
  return make_path(f, std::move(nodes), kMaxAngleIncrement);
}

// A loop at p whose f-image winds `target` times, built from coordinate
// loops (the Bezout step of the gcd argument).
std::optional<SampledPath> coordinate_correction(const MixedPolynomial& f, const FibrationConfig& cfg,
                                                 const FiberPoint& p, int target,
                                                 const ConnectOptions& opt) {
  std::vector<SampledPath> loops;
  std::vector<int> windings;
  for (Eigen::Index j = 0; j < p.z.size(); ++j) {
    auto loop = coordinate_loop(f, cfg, p.z, j, opt);
    int w = 0;
    if (loop) {
      try {
        w = rotation_number(f, *loop, cfg.tol_angle);
      } catch (const NumericalError&) {
        loop.reset();
      }
    }
    loops.push_back(loop ? std::move(*loop) : SampledPath{});
    windings.push_back(loop ? w : 0);
  }
  const auto c = bezout_combination(windings, target, 6);
  if (!c) return std::nullopt;
  SampledPath out{{p.z}, {0.0}};
  for (std::size_t j = 0; j < c->size(); ++j) {
    if ((*c)[j] == 0) continue;
    const SampledPath piece = (*c)[j] > 0 ? loops[j] : reversed(f, loops[j]);
    for (int k = 0; k < std::abs((*c)[j]); ++k) out = concatenate(f, out, piece);
  }
  return out;
}

double max_node_gap(const std::vector<Point>& nodes) {
  double g = 0.0;
  for (std::size_t k = 1; k < nodes.size(); ++k) g = std::max(g, (nodes[k] - nodes[k - 1]).norm());
  return g;
}

std::optional<SampledPath> deform_and_check(const MixedPolynomial& f, const FibrationConfig& cfg,
                                            const FiberPoint& q, const FiberPoint& p,
                                            const SampledPath& sigma, double scale,
                                            const ConnectOptions& options, std::string& failure) {
  SampledPath hat = deform_path_to_fiber(f, sigma, cfg);
  if ((hat.nodes.front() - q.z).norm() > options.endpoint_tol * scale ||
      (hat.nodes.back() - p.z).norm() > options.endpoint_tol * scale) {
    failure = "deformed path does not end at p";
    return std::nullopt;
  }
  if (max_node_gap(hat.nodes) > options.max_gap * cfg.r0) {
    failure = "deformed path has a gap";
    return std::nullopt;
  }
  if (angle_spread(f, hat.nodes) > cfg.tol_angle) {
    failure = "deformed path leaves the fiber";
    return std::nullopt;
  }
  return hat;
}

}  // namespace

std::vector<FiberPoint> sample_fiber(const MixedPolynomial& f, const FibrationConfig& cfg,
                                     std::size_t count, Seed seed, const SampleOptions& options) {
  cfg.validate();
  if (count < 2) throw InputError("sample_fiber needs N >= 2");
  const int n = f.num_vars();
  if (2 * n > static_cast<int>(std::size(kPrimes)))
    throw InputError("sample_fiber supports at most 12 variables");
  const double dedup = options.dedup_radius < 0.0 ? 1e-4 * cfg.r0 : options.dedup_radius;
  const double radius = cfg.working_radius();

  auto rng = make_rng(seed);
  std::vector<double> shift(2 * n);
  for (auto& s : shift) s = uniform(rng, 0.0, 1.0);

  std::vector<FiberPoint> points;
  const std::size_t max_tries = count * options.retries_per_point;
  for (std::size_t tries = 0, index = 1; points.size() < count && tries < max_tries; ++tries, ++index) {
    const Point start = ball_seed(index, shift, radius);
    FiberPoint fp;
    try {
      fp = find_fiber_point(f, cfg.delta, cfg, start);
    } catch (const NumericalError&) {
      continue;
    }
    if (fp.z.norm() > radius) continue;
    const bool duplicate = std::any_of(points.begin(), points.end(), [&](const FiberPoint& q) {
      return (q.z - fp.z).norm() < dedup;
    });
    if (!duplicate) points.push_back(std::move(fp));
  }
  if (points.size() < 2)
    throw NumericalError(FailureKind::empty_fiber,
                         "found " + std::to_string(points.size()) + " fiber points");
  return points;
}

ConnectionOutcome connect_points(const MixedPolynomial& f, const FibrationConfig& cfg,
                                 const FiberPoint& q, const FiberPoint& p,
                                 const ConnectOptions& options) {
  ConnectionOutcome outcome;
  const double scale = std::max(1.0, p.z.norm());
  if ((q.z - p.z).norm() <= options.endpoint_tol * scale) {
    outcome.path = SampledPath{{q.z}, {0.0}};
    return outcome;
  }
  const double radius = cfg.working_radius();
  const double span = (q.z - p.z).norm();
  const Eigen::Index n = q.z.size();

  std::set<int> open_windings;
  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    ++outcome.attempts;
    std::vector<Point> vertices{q.z};
    if (attempt > 0) {
      auto rng = make_rng(options.seed, static_cast<std::uint64_t>(attempt));
      const int waypoints = std::min(attempt, 3);
      for (int w = 1; w <= waypoints; ++w) {
        const double t = static_cast<double>(w) / (waypoints + 1);
        Point v = q.z + t * (p.z - q.z);
        for (Eigen::Index j = 0; j < n; ++j)
          v[j] += options.waypoint_spread * span *
                  Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
        if (v.norm() > radius) v *= radius / v.norm();
        vertices.push_back(std::move(v));
      }
    }
    vertices.push_back(p.z);

    auto nodes = ambient_path(f, cfg, vertices, options, outcome.last_failure);
    if (!nodes) continue;
    try {
      SampledPath sigma = make_path(f, std::move(*nodes), options.max_increment);
      const int m = rotation_number(f, sigma, cfg.tol_angle);
      outcome.windings.push_back(m);
      if (m != 0) {
        // The deformed path ends where the loop ends; skip the costly
        // deformation when that is not p.
        if (open_windings.count(m) == 0) {
          SampledPath loop = correcting_loop(f, p, m, cfg);
          if ((loop.nodes.back() - p.z).norm() <= options.endpoint_tol * scale) {
            sigma = concatenate(f, sigma, loop);
          } else {
            open_windings.insert(m);
          }
        }
        if (open_windings.count(m) != 0) {
          outcome.last_failure = "flow loop for winding " + std::to_string(m) + " does not close";
          if (outcome.deferred.size() < 2) outcome.deferred.emplace_back(m, std::move(sigma));
          continue;
        }
      }
      if (auto hat = deform_and_check(f, cfg, q, p, sigma, scale, options, outcome.last_failure)) {
        outcome.path = std::move(hat);
        return outcome;
      }
    } catch (const NumericalError& e) {
      outcome.last_failure = e.what();
    } catch (const InputError& e) {
      outcome.last_failure = e.what();
    }
  }

  if (options.coordinate_correction) correct_deferred(f, cfg, q, p, outcome, options);
  return outcome;
}

void correct_deferred(const MixedPolynomial& f, const FibrationConfig& cfg, const FiberPoint& q,
                      const FiberPoint& p, ConnectionOutcome& outcome, const ConnectOptions& options) {
  if (outcome.path) return;
  const double scale = std::max(1.0, p.z.norm());
  auto& pending = outcome.deferred;
  std::stable_sort(pending.begin(), pending.end(),
                   [](const auto& x, const auto& y) { return std::abs(x.first) < std::abs(y.first); });
  for (const auto& [m, sigma] : pending) {
    try {
      auto loop = coordinate_correction(f, cfg, p, -m, options);
      if (!loop) {
        outcome.last_failure = "no closed correcting loop for winding " + std::to_string(m);
        continue;
      }
      if (auto hat = deform_and_check(f, cfg, q, p, concatenate(f, sigma, *loop), scale, options,
                                      outcome.last_failure)) {
        outcome.path = std::move(hat);
        return;
      }
    } catch (const NumericalError& e) {
      outcome.last_failure = e.what();
    } catch (const InputError& e) {
      outcome.last_failure = e.what();
    }
  }
}

std::optional<SampledPath> connect_attempt(const MixedPolynomial& f, const FibrationConfig& cfg,
                                           const FiberPoint& q, const FiberPoint& p,
                                           const ConnectOptions& options) {
  return connect_points(f, cfg, q, p, options).path;
}

ComponentReport component_report(const MixedPolynomial& f, const FibrationConfig& cfg,
                                 std::size_t count, std::size_t budget, Seed seed,
                                 const ComponentOptions& options) {
  ComponentReport report;
  report.points = sample_fiber(f, cfg, count, seed, options.sampling);
  const std::size_t npts = report.points.size();

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  auto add_pair = [&](std::size_t i, std::size_t j) {
    auto key = std::minmax(i, j);
    if (seen.insert(key).second) pairs.emplace_back(key);
  };
  std::vector<std::size_t> order(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> dist(npts);
    for (std::size_t j = 0; j < npts; ++j) dist[j] = (report.points[i].z - report.points[j].z).norm();
    const std::size_t k = std::min(options.neighbors, npts - 1);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k + 1), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
                      });
    for (std::size_t r = 0, taken = 0; r <= k && taken < k; ++r) {
      if (order[r] == i) continue;
      add_pair(i, order[r]);
      ++taken;
    }
  }
  // Random long-range pairs come from their own stream, so a larger budget
  // only appends pairs.
  // Round-robin over the points so that every point gets long-range partners.
  auto rng = make_rng(seed, 0x6c6f6e67ULL);
  for (std::size_t t = 0; t < budget; ++t) {
    const std::size_t i = t % npts;
    std::size_t j = rng() % (npts - 1);
    if (j >= i) ++j;
    add_pair(i, j);
  }

  // Cheap attempts first; the coordinate-loop correction only for pairs
  // still apart afterwards. Each pair has its own seed, so the final classes
  // do not depend on the order.
  UnionFind uf(npts);
  std::vector<std::optional<ConnectionOutcome>> first(pairs.size());
  auto record = [&](std::size_t i, std::size_t j, SampledPath path) {
    uf.unite(i, j);
    report.edges.push_back({i, j, report.paths.size()});
    report.paths.push_back(std::move(path));
  };
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    if (uf.connected(i, j)) continue;
    ConnectOptions copt = options.connect;
    copt.seed = mix_seed(seed, i * npts + j);
    copt.coordinate_correction = false;
    ++report.attempted;
    first[k] = connect_points(f, cfg, report.points[i], report.points[j], copt);
    if (first[k]->path) {
      record(i, j, std::move(*first[k]->path));
      first[k].reset();
    }
  }
  if (options.connect.coordinate_correction) {
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [i, j] = pairs[k];
      if (uf.connected(i, j)) continue;
      ConnectionOutcome outcome;
      if (first[k]) {
        outcome = std::move(*first[k]);
      } else {
        // Skipped in the first pass; run it in full.
        ConnectOptions copt = options.connect;
        copt.seed = mix_seed(seed, i * npts + j);
        copt.coordinate_correction = false;
        ++report.attempted;
        outcome = connect_points(f, cfg, report.points[i], report.points[j], copt);
      }
      if (!outcome.path) correct_deferred(f, cfg, report.points[i], report.points[j], outcome, options.connect);
      if (outcome.path) {
        record(i, j, std::move(*outcome.path));
      } else {
        ++report.failed;
      }
    }
  } else {
    for (const auto& o : first)
      if (o) ++report.failed;
  }

  report.labels = uf.labels();
  report.component_count = uf.class_count();
  report.component_sizes.assign(report.component_count, 0);
  for (std::size_t l : report.labels) ++report.component_sizes[l];
  std::sort(report.component_sizes.rbegin(), report.component_sizes.rend());
  return report;
}

bool validate_evidence(const MixedPolynomial& f, const FibrationConfig& cfg,
                       const ComponentReport& report) {
  for (const auto& e : report.edges) {
    if (e.path >= report.paths.size() || e.a >= report.points.size() || e.b >= report.points.size())
      return false;
    const auto& nodes = report.paths[e.path].nodes;
    if (nodes.empty()) return false;
    const double scale = std::max(1.0, report.points[e.b].z.norm());
    if ((nodes.front() - report.points[e.a].z).norm() > 1e-8 * scale) return false;
    if ((nodes.back() - report.points[e.b].z).norm() > 1e-8 * scale) return false;
    if (angle_spread(f, nodes) > cfg.tol_angle) return false;
  }
  return true;
}

void FactoredGerm::validate() const {
  if (factors.size() != multiplicities.size())
    throw InputError("one multiplicity per factor required");
  if (multiplicities.empty()) throw InputError("a factored germ needs at least one factor");
  for (int m : multiplicities)
    if (m < 1) throw InputError("multiplicities must be >= 1");
  for (const auto& g : factors) {
    if (g.num_vars() != factors.front().num_vars())
      throw InputError("factors live in different numbers of variables");
    if (!g.is_holomorphic()) throw InputError("factors must be holomorphic");
  }
}

MixedPolynomial FactoredGerm::expand() const {
  validate();
  MixedPolynomial product = MixedPolynomial::constant(factors.front().num_vars(), 1.0);
  for (std::size_t i = 0; i < factors.size(); ++i) product *= factors[i].pow(multiplicities[i]);
  return product;
}

int gcd_of(std::span<const int> values) {
  if (values.empty()) throw InputError("gcd of an empty list");
  int g = 0;
  for (int v : values) {
    if (v < 1) throw InputError("multiplicities must be >= 1");
    g = std::gcd(g, v);
  }
  return g;
}

int gcd_predict(const FactoredGerm& germ) {
  if (germ.multiplicities.empty()) throw InputError("no multiplicities");
  return gcd_of(germ.multiplicities);
}

int cyclic_cover_components(std::span<const int> multiplicities) {
  if (multiplicities.empty()) throw InputError("cyclic cover of an empty factor list");
  for (int v : multiplicities)
    if (v < 1) throw InputError("multiplicities must be >= 1");
  const auto n1 = static_cast<std::size_t>(multiplicities.front());
  UnionFind uf(n1);
  for (std::size_t j = 1; j < multiplicities.size(); ++j) {
    const auto step = static_cast<std::size_t>(multiplicities[j]) % n1;
    for (std::size_t a = 0; a < n1; ++a) uf.unite(a, (a + step) % n1);
  }
  return static_cast<int>(uf.class_count());
}

BranchClusters branch_clusters(const MixedPolynomial& g, const std::vector<FiberPoint>& points,
                               int n0) {
  if (n0 < 1) throw InputError("n0 must be >= 1");
  BranchClusters out;
  const double sector = 2.0 * std::numbers::pi / n0;
  std::set<int> used;
  for (const auto& p : points) {
    const double base = std::arg(p.target) / n0;
    const double a = std::arg(evaluate(g, p.z)) - base;
    const double k = std::round(a / sector);
    const double dev = std::abs(a - k * sector);
    int label = static_cast<int>(k) % n0;
    if (label < 0) label += n0;
    out.labels.push_back(label);
    out.max_deviation = std::max(out.max_deviation, dev);
    used.insert(label);
  }
  out.class_count = used.size();
  return out;
}

}  // namespace milnor

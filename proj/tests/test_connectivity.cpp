#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <numeric>

#include "milnor/connectivity.hpp"
#include "milnor/errors.hpp"
#include "milnor/expression.hpp"
#include "milnor/seeding.hpp"

using namespace milnor;

namespace {

Point pt(std::initializer_list<Complex> values) {
  Point z(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (Complex v : values) z[k++] = v;
  return z;
}

// Euclid, written out independently of std::gcd.
int euclid(int a, int b) {
  while (b != 0) {
    const int r = a % b;
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

TEST_SUITE("connectivity") {
  TEST_CASE("sample_fiber: points lie on the fiber in the working ball") {
    const auto f = parse_mixed_expression("z1^2*z2^3");
    FibrationConfig cfg;
    const auto pts = sample_fiber(f, cfg, 40, 5);
    CHECK(pts.size() == 40);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(std::abs(evaluate(f, pts[i].z) - cfg.delta) <= cfg.tol_fiber);
      CHECK(pts[i].z.norm() <= cfg.working_radius());
      for (std::size_t j = 0; j < i; ++j) CHECK((pts[i].z - pts[j].z).norm() >= 1e-4);
    }
  }

  TEST_CASE("sample_fiber: determinism and errors") {
    const auto f = parse_mixed_expression("z1*z2");
    FibrationConfig cfg;
    const auto a = sample_fiber(f, cfg, 10, 3);
    const auto b = sample_fiber(f, cfg, 10, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].z == b[i].z);
    CHECK_THROWS_AS(sample_fiber(f, cfg, 1, 3), InputError);
    CHECK_THROWS_AS(sample_fiber(parse_mixed_expression("1", 2), cfg, 10, 3), InputError);
  }

  TEST_CASE("connect_attempt: a point to itself is the constant path") {
    const auto f = parse_mixed_expression("z1*z2");
    FibrationConfig cfg;
    const auto p = sample_fiber(f, cfg, 2, 1).front();
    const auto path = connect_attempt(f, cfg, p, p);
    REQUIRE(path.has_value());
    CHECK(path->nodes.size() == 1);
  }

  TEST_CASE("connect_attempt: linear function, segment inside the fiber") {
    const auto f = parse_mixed_expression("z1", 2);
    FibrationConfig cfg;
    const FiberPoint q{pt({cfg.delta, 0.0}), cfg.delta, 0.0};
    const FiberPoint p{pt({cfg.delta, Complex(0.3, 0.1)}), cfg.delta, 0.0};
    const auto path = connect_attempt(f, cfg, q, p);
    REQUIRE(path.has_value());
    CHECK((path->nodes.front() - q.z).norm() <= 1e-8);
    CHECK((path->nodes.back() - p.z).norm() <= 1e-8);
    for (const auto& z : path->nodes) CHECK(std::abs(z[0] - cfg.delta) < 1e-9);
  }

  TEST_CASE("connect_points: deformed paths stay in the fiber") {
    const auto f = parse_mixed_expression("z1*z2");
    FibrationConfig cfg;
    const auto pts = sample_fiber(f, cfg, 12, 9);
    int successes = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      ConnectOptions opt;
      opt.seed = i;
      const auto out = connect_points(f, cfg, pts[0], pts[i], opt);
      CHECK(out.attempts >= 1);
      if (!out.path) continue;
      ++successes;
      CHECK((out.path->nodes.front() - pts[0].z).norm() <= 1e-8);
      CHECK((out.path->nodes.back() - pts[i].z).norm() <= 1e-8);
      CHECK(angle_spread(f, out.path->nodes) <= cfg.tol_angle);
    }
    CHECK(successes > 0);
  }

  TEST_CASE("connect_points: coordinate correction closes odd windings") {
    // Every ambient path for these pairs of z1^2 z2^3 has m != 0 and the
    // flow loop h^{-m} does not return to p; only the correction can join them.
    const auto f = parse_mixed_expression("z1^2*z2^3");
    FibrationConfig cfg;
    const auto pts = sample_fiber(f, cfg, 6, 2);
    int corrected = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      ConnectOptions opt;
      opt.seed = 100 + i;
      const auto out = connect_points(f, cfg, pts[0], pts[i], opt);
      if (!out.path) continue;
      CHECK((out.path->nodes.back() - pts[i].z).norm() <= 1e-8);
      CHECK(angle_spread(f, out.path->nodes) <= cfg.tol_angle);
      const bool all_winding =
          std::none_of(out.windings.begin(), out.windings.end(), [](int m) { return m == 0; });
      if (all_winding) ++corrected;

      opt.coordinate_correction = false;
      if (all_winding) CHECK_FALSE(connect_points(f, cfg, pts[0], pts[i], opt).path.has_value());
    }
    CHECK(corrected >= 1);
  }

  TEST_CASE("component_report: connected fiber of z1 z2") {
    const auto f = parse_mixed_expression("z1*z2");
    FibrationConfig cfg;
    const auto r = component_report(f, cfg, 20, 20, 4);
    CHECK(r.component_count == 1);
    CHECK(r.component_sizes == std::vector<std::size_t>{20});
    CHECK(validate_evidence(f, cfg, r));
    CHECK(std::string(ComponentReport::caveat) == "upper bound");
  }

  TEST_CASE("component_report: evidence never joins different branches") {
    // f = (z1 z2)^2: points on different branches of sqrt are in different components.
    const auto g = parse_mixed_expression("z1*z2");
    const auto f = g.pow(2);
    FibrationConfig cfg;
    const auto r = component_report(f, cfg, 16, 16, 8);
    const auto branches = branch_clusters(g, r.points, 2);
    CHECK(branches.class_count == 2);
    CHECK(branches.max_deviation < 1e-6);
    CHECK(r.component_count >= 2);
    for (const auto& e : r.edges) CHECK(branches.labels[e.a] == branches.labels[e.b]);
    CHECK(validate_evidence(f, cfg, r));
  }

  TEST_CASE("component_report: deterministic and monotone in the budget") {
    const auto f = parse_mixed_expression("z1*z2");
    FibrationConfig cfg;
    ComponentOptions opt;
    opt.neighbors = 1;
    const auto small = component_report(f, cfg, 16, 0, 6, opt);
    const auto again = component_report(f, cfg, 16, 0, 6, opt);
    const auto large = component_report(f, cfg, 16, 24, 6, opt);
    CHECK(small.component_count == again.component_count);
    CHECK(small.labels == again.labels);
    CHECK(large.component_count <= small.component_count);
  }

  TEST_CASE("validate_evidence rejects a tampered path") {
    const auto f = parse_mixed_expression("z1*z2");
    FibrationConfig cfg;
    auto r = component_report(f, cfg, 10, 0, 2);
    REQUIRE_FALSE(r.paths.empty());
    r.paths.front().nodes.back()[0] += 1e-3;
    CHECK_FALSE(validate_evidence(f, cfg, r));
  }

  TEST_CASE("cyclic cover model agrees with Euclid on random tuples") {
    auto rng = make_rng(51);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t r = 1 + rng() % 4;
      std::vector<int> m(r);
      for (auto& v : m) v = 1 + static_cast<int>(rng() % 30);
      const int want = std::accumulate(m.begin(), m.end(), 0, euclid);
      CHECK(cyclic_cover_components(m) == want);
      CHECK(gcd_of(m) == want);
    }
  }

  TEST_CASE("cyclic cover examples") {
    CHECK(cyclic_cover_components(std::vector<int>{2, 3}) == 1);
    CHECK(cyclic_cover_components(std::vector<int>{4, 6}) == 2);
    CHECK(cyclic_cover_components(std::vector<int>{6, 10, 15}) == 1);
    CHECK(cyclic_cover_components(std::vector<int>{7}) == 7);
    CHECK_THROWS_AS(cyclic_cover_components(std::vector<int>{}), InputError);
    CHECK_THROWS_AS(cyclic_cover_components(std::vector<int>{3, 0}), InputError);
  }

  TEST_CASE("factored germs") {
    FactoredGerm germ{{parse_mixed_expression("z1", 2), parse_mixed_expression("z2", 2)}, {2, 4}};
    CHECK(gcd_predict(germ) == 2);
    CHECK(germ.expand() == parse_mixed_expression("z1^2*z2^4"));
    FactoredGerm mixed{{parse_mixed_expression("zb1", 2)}, {2}};
    CHECK_THROWS_AS(mixed.validate(), InputError);
    FactoredGerm unmatched{{parse_mixed_expression("z1", 2)}, {2, 3}};
    CHECK_THROWS_AS(unmatched.validate(), InputError);
  }

  TEST_CASE("branch clusters of a cube") {
    const auto g = parse_mixed_expression("z1", 1);
    std::vector<FiberPoint> pts;
    for (int k = 0; k < 6; ++k) {
      Point z(1);
      z[0] = std::polar(0.1, (0.3 + 2.0 * std::numbers::pi * k) / 3.0);
      pts.push_back({z, std::polar(1e-3, 0.3), 0.0});
    }
    const auto c = branch_clusters(g, pts, 3);
    CHECK(c.class_count == 3);
    CHECK(c.labels == std::vector<int>{0, 1, 2, 0, 1, 2});
    CHECK(c.max_deviation < 1e-12);
  }
}

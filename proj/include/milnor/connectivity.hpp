#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "milnor/fibration.hpp"
#include "milnor/mixed_polynomial.hpp"
#include "milnor/seeding.hpp"

namespace milnor {

struct SampleOptions {
  /// Points closer than this are merged; negative means 1e-4 * r0.
  double dedup_radius = -1.0;
  /// Seeds tried per requested point before giving up.
  std::size_t retries_per_point = 20;
};

/// Up to N distinct points of F_0 = f^{-1}(delta) inside the working ball,
/// Newton-projected from scrambled Halton seeds in the ball. Throws
/// NumericalError(empty_fiber) when fewer than two points are found.
std::vector<FiberPoint> sample_fiber(const MixedPolynomial& f, const FibrationConfig& cfg,
                                     std::size_t count, Seed seed, const SampleOptions& options = {});

struct ConnectOptions {
  int retries = 8;                 // extra attempts through random waypoints (at most 3 each)
  double waypoint_spread = 0.25;   // waypoint offset, relative to |q - p|
  double node_spacing = 0.02;      // initial ambient node spacing, relative to r0
  double max_gap = 0.05;           // largest node gap of ambient and deformed paths, relative to r0
  double max_increment = 0.7853981633974483;  // pi / 4, per-node change of arg f
  std::size_t max_nodes = 1024;
  double endpoint_tol = 1e-8;
  /// When no attempt has winding 0 and the flow loop h^{-m} does not close,
  /// correct with a Bezout combination of coordinate-rotation loops at p.
  bool coordinate_correction = true;
  Seed seed = 0;
};

struct ConnectionOutcome {
  std::optional<SampledPath> path;  // in-fiber path from q to p
  std::vector<int> windings;        // rotation number m of each ambient path tried
  int attempts = 0;
  std::string last_failure;
  /// Ambient paths (with their m != 0) whose flow loop h^{-m} did not close,
  /// kept for correct_deferred.
  std::vector<std::pair<int, SampledPath>> deferred;
};

/// One in-fiber connection attempt: ambient path in dE from q to p (straight
/// polyline, nodes pushed radially onto |f| = delta), its rotation number m,
/// the correcting flow loop for m, and the deformation into F_0. Succeeds only
/// when the deformed path really ends at p; absence proves nothing. Attempts
/// with winding 0 are preferred; see ConnectOptions::coordinate_correction.
ConnectionOutcome connect_points(const MixedPolynomial& f, const FibrationConfig& cfg,
                                 const FiberPoint& q, const FiberPoint& p,
                                 const ConnectOptions& options = {});

/// Second chance for a failed outcome: closes each deferred ambient path with
/// a Bezout combination of coordinate-rotation loops at p, then deforms.
void correct_deferred(const MixedPolynomial& f, const FibrationConfig& cfg, const FiberPoint& q,
                      const FiberPoint& p, ConnectionOutcome& outcome,
                      const ConnectOptions& options = {});

std::optional<SampledPath> connect_attempt(const MixedPolynomial& f, const FibrationConfig& cfg,
                                           const FiberPoint& q, const FiberPoint& p,
                                           const ConnectOptions& options = {});

struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t path = 0;  // index into ComponentReport::paths
};

struct ComponentReport {
  std::vector<FiberPoint> points;
  std::vector<Edge> edges;
  std::vector<SampledPath> paths;
  std::size_t component_count = 0;
  std::vector<std::size_t> component_sizes;  // descending
  std::vector<std::size_t> labels;           // component label per point
  std::size_t attempted = 0;
  std::size_t failed = 0;
  /// Missing connections can only split classes: component_count bounds the
  /// true number of components from above.
  static constexpr const char* caveat = "upper bound";
};

struct ComponentOptions {
  std::size_t neighbors = 6;
  SampleOptions sampling;
  ConnectOptions connect;
};

/// Samples the fiber, tries connections along the k-nearest-neighbour graph
/// and then `budget` random pairs, and counts union-find classes. Pairs that
/// are already joined are skipped.
ComponentReport component_report(const MixedPolynomial& f, const FibrationConfig& cfg,
                                 std::size_t count, std::size_t budget, Seed seed,
                                 const ComponentOptions& options = {});

/// Re-checks every evidence path: endpoints, in-fiber angle spread <= tol_angle.
bool validate_evidence(const MixedPolynomial& f, const FibrationConfig& cfg,
                       const ComponentReport& report);

/// f = f_1^{n_1} ... f_r^{n_r}; coprimality of the factors is the caller's claim.
struct FactoredGerm {
  std::vector<MixedPolynomial> factors;
  std::vector<int> multiplicities;

  void validate() const;
  MixedPolynomial expand() const;
};

int gcd_of(std::span<const int> values);

/// gcd(n_1, ..., n_r): the number of components of the Milnor fiber.
int gcd_predict(const FactoredGerm& germ);

/// Residues 0..n_1-1 (the points of F on the first normal circle) joined by
/// a ~ a + n_j mod n_1 for j >= 2; returns the number of classes.
int cyclic_cover_components(std::span<const int> multiplicities);

struct BranchClusters {
  std::vector<int> labels;  // k with arg g(z) ~ (angle + 2 pi k) / n0
  std::size_t class_count = 0;
  double max_deviation = 0.0;  // rad, from the nearest class center
};

/// For points of the fiber of f = g^{n0} over delta e^{i angle}: the branch
/// of g^{1/n0} each point lies on.
BranchClusters branch_clusters(const MixedPolynomial& g, const std::vector<FiberPoint>& points,
                               int n0);

}  // namespace milnor

#pragma once

#include <optional>
#include <vector>

#include "milnor/mixed_polynomial.hpp"

namespace milnor {

/// Rhie lens family phi_n(z) = conj(z) - z^{n-2} / (z^{n-1} - a^{n-1}) - eps / z.
struct LensConfig {
  int n = 2;
  double a = 0.3;
  double epsilon = 1e-2;
  int grid = 96;  // seeds per side of the search square
  double dedup_radius = 1e-7;
  double half_width = 2.0;

  /// n >= 2, 0 < a < 1/2, 0 < epsilon < a / 10, grid >= 2, positive radii.
  void validate() const;
};

/// 1e-2, 1e-3, 1e-4 for n = 2, 3, 4; 10^{-n} beyond.
double default_lens_epsilon(int n);

/// Numerator over z (z^{n-1} - a^{n-1}):
/// conj(z) z^n - a^{n-1} conj(z) z - (1 + eps) z^{n-1} + eps a^{n-1}, one variable.
MixedPolynomial rhie_numerator(const LensConfig& cfg);

/// Two-variable homogenization in (z, w) of the numerator, every term of
/// radial degree n + 1; its restriction to w = 1 is rhie_numerator.
MixedPolynomial rhie_homogenized(const LensConfig& cfg);

/// phi_n(z) in rational form. Undefined at the poles.
Complex rhie_phi(const LensConfig& cfg, Complex z);

struct LensRoot {
  Complex z;
  double residual = 0.0;  // |phi_n(z)|
};

/// Multi-start damped Newton on (Re g, Im g) = 0 from grid x grid seeds in the
/// square |Re z|, |Im z| <= half_width. Roots at or near the poles are
/// dropped, the rest must satisfy |phi_n| < 1e-8. Sorted by (re, im).
std::vector<LensRoot> lens_roots(const LensConfig& cfg);

/// 5n - 5.
int expected_root_count(int n);

struct EpsilonThreshold {
  /// Largest epsilon found with count == 5n - 5 (absent if none was found).
  std::optional<double> matching;
  /// Smallest epsilon above `matching` where the count differs.
  std::optional<double> failing;
  std::vector<std::pair<double, int>> evaluations;  // (epsilon, count)
};

/// Scans epsilon over decades below a / 10 down to `floor`, then bisects (in
/// log scale) between the largest matching and the next failing value.
EpsilonThreshold epsilon_threshold(const LensConfig& cfg, double floor = 1e-8, int bisections = 12);

}  // namespace milnor

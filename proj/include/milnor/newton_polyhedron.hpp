#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "milnor/mixed_polynomial.hpp"
#include "milnor/seeding.hpp"

namespace milnor {

/// Non-negative integer weights P = (p_1, ..., p_n), not all zero.
struct WeightVector {
  std::vector<int> p;

  WeightVector() = default;
  explicit WeightVector(std::vector<int> weights);

  int size() const noexcept { return static_cast<int>(p.size()); }
  /// I(P) = {i : p_i = 0}.
  Subset zero_set() const;
  /// Radial weighted degree sum_i p_i (nu_i + mu_i).
  int degree(const MixedTerm& t) const;

  bool operator==(const WeightVector&) const = default;
};

struct NewtonData {
  /// Distinct nu + mu over the terms, sorted.
  std::vector<Exponent> radial_support;
  bool convenient = false;
  /// Every non-empty I with f^I identically zero, ordered by size then lexicographically.
  std::vector<Subset> vanishing_subspaces;
  /// The complement list; V^sharp is the union of V over the tori of these.
  std::vector<Subset> non_vanishing_subspaces;
};

/// Throws InputError for the zero polynomial or n > 12.
NewtonData newton_data(const MixedPolynomial& f);

/// Sum of the terms of minimal weighted radial degree.
MixedPolynomial face_function(const MixedPolynomial& f, const WeightVector& weights);

enum class Verdict { witness_found, no_witness };

const char* to_string(Verdict v) noexcept;

struct DegeneracyReport {
  WeightVector face;
  Verdict verdict = Verdict::no_witness;
  /// Full point in (C*)^n at which the face function is mixed-critical.
  std::optional<Point> witness;
  std::size_t trials = 0;
  /// Best criticality residual seen (see criticality_residual).
  double residual = 0.0;
};

struct CriticalSearchOptions {
  double min_modulus = 0.1;
  double max_modulus = 10.0;
  int max_iter = 80;
};

/// sigma_min(J(z)) / S(z), where S(z) = sum_k |c_k| sum_j (nu_kj + mu_kj) |m_k(z)| / |z_j|
/// bounds the size of the derivative without vanishing at critical points.
/// Zero exactly at mixed critical points of g on the torus; invariant under
/// scaling g by a constant.
double criticality_residual(const MixedPolynomial& g, const Point& z);

/// Multi-start damped Gauss-Newton search for a point of the torus where the
/// real Jacobian of the face function f_P has rank < 2. Start points have
/// log-uniform moduli in [min_modulus, max_modulus]. A witness is a point with
/// criticality_residual < tol. "no_witness" is evidence only.
DegeneracyReport nondegeneracy_search(const MixedPolynomial& f, const WeightVector& weights,
                                      std::size_t trials, Seed seed, double tol = 1e-8,
                                      const CriticalSearchOptions& options = {});

/// Primitive weight vectors with p_i = 0 exactly on `subset` and 1 <= p_j <= bound elsewhere.
std::vector<WeightVector> tameness_weights(int n, const Subset& subset, int bound);

struct TamenessOptions {
  int weight_bound = 5;
  std::size_t samples_per_face = 4;  // points z_I per weight vector
  double tol = 1e-8;
};

/// For each weight P with I(P) = I, samples z_I in (C*)^I with sum |z_i|^2 <= epsilon
/// and searches f_P as a polynomial in the remaining variables. Reports carry
/// the full n-dimensional witness. Throws InputError unless I is vanishing.
std::vector<DegeneracyReport> tameness_search(const MixedPolynomial& f, const Subset& subset,
                                              double epsilon, std::size_t trials, Seed seed,
                                              const TamenessOptions& options = {});

struct VsharpProbe {
  Subset subset;              // non-vanishing coordinate subspace searched
  std::optional<Point> point;  // regular zero of f in (C*)^I near the origin, embedded in C^n
};

/// Looks for mixed-regular zeros of f on the tori of the non-vanishing
/// coordinate subspaces inside the ball of the given radius. Sampling only:
/// an empty result does not prove that V^sharp is empty.
std::vector<VsharpProbe> probe_vsharp(const MixedPolynomial& f, double radius,
                                      std::size_t attempts, Seed seed);

}  // namespace milnor

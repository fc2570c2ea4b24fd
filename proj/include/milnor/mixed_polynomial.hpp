#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace milnor {

using Complex = std::complex<double>;

/// A point of C^n.
using Point = Eigen::VectorXcd;

/// Exponent vector of z (nu) or of zbar (mu).
using Exponent = std::vector<int>;

/// Sorted, duplicate-free set of 0-based variable indices. Printed 1-based.
using Subset = std::vector<int>;

/// One monomial c * z^nu * zbar^mu.
struct MixedTerm {
  Complex coeff;
  Exponent nu;
  Exponent mu;

  /// nu + mu, the exponent seen by radial (real-weighted) degrees.
  Exponent radial_exponent() const;
  int total_degree() const;

  bool operator==(const MixedTerm&) const = default;
};

/// A mixed polynomial f(z, zbar) = sum c_{nu,mu} z^nu zbar^mu in canonical form:
/// terms sorted lexicographically on (nu, mu), merged, and free of zero
/// coefficients. The zero polynomial has no terms.
class MixedPolynomial {
 public:
  MixedPolynomial() = default;

  /// The zero polynomial in n variables.
  explicit MixedPolynomial(int n);

  /// Validates exponents and merges like terms. Throws InputError.
  MixedPolynomial(int n, std::vector<MixedTerm> terms);

  static MixedPolynomial constant(int n, Complex c);
  /// z_j (0-based j).
  static MixedPolynomial variable(int n, int j);
  /// zbar_j (0-based j).
  static MixedPolynomial conjugate_variable(int n, int j);

  int num_vars() const noexcept { return n_; }
  const std::vector<MixedTerm>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_holomorphic() const noexcept;
  bool is_constant() const noexcept;

  /// Smallest total degree |nu| + |mu| over the terms. Zero polynomial: 0.
  int min_total_degree() const noexcept;
  int max_total_degree() const noexcept;

  /// Term-wise conjugate: swaps nu and mu and conjugates coefficients, so
  /// that evaluate(f.conjugate(), z) == conj(evaluate(f, z)).
  MixedPolynomial conjugate() const;

  MixedPolynomial pow(int k) const;

  MixedPolynomial& operator+=(const MixedPolynomial& other);
  MixedPolynomial& operator-=(const MixedPolynomial& other);
  MixedPolynomial& operator*=(const MixedPolynomial& other);
  MixedPolynomial& operator*=(Complex c);

  friend MixedPolynomial operator+(MixedPolynomial a, const MixedPolynomial& b) { return a += b; }
  friend MixedPolynomial operator-(MixedPolynomial a, const MixedPolynomial& b) { return a -= b; }
  friend MixedPolynomial operator*(MixedPolynomial a, const MixedPolynomial& b) { return a *= b; }
  friend MixedPolynomial operator*(MixedPolynomial a, Complex c) { return a *= c; }
  friend MixedPolynomial operator*(Complex c, MixedPolynomial a) { return a *= c; }
  MixedPolynomial operator-() const { return *this * Complex(-1.0, 0.0); }

  bool operator==(const MixedPolynomial&) const = default;

 private:
  void canonicalize();

  int n_ = 0;
  std::vector<MixedTerm> terms_;
};

/// sum c z^nu zbar^mu. Throws InputError on a dimension mismatch.
Complex evaluate(const MixedPolynomial& f, const Point& z);

/// f^I: substitutes z_j = 0 for j outside I. The result has |I| variables,
/// numbered in the order of I. Throws InputError when I is empty or invalid.
MixedPolynomial restrict_to_subspace(const MixedPolynomial& f, const Subset& subset);

/// Fixes the variables in `fixed` at `values` (same order) and returns a
/// polynomial in the remaining variables, in increasing index order.
MixedPolynomial substitute(const MixedPolynomial& f, const Subset& fixed, const Point& values);

/// Places z_I into C^n, zero elsewhere.
Point embed(const Point& z_subset, const Subset& subset, int n);

/// Complement of `subset` in {0, ..., n-1}.
Subset complement(const Subset& subset, int n);

/// Throws InputError unless `subset` is sorted, duplicate-free and inside [0, n).
void check_subset(const Subset& subset, int n);

}  // namespace milnor

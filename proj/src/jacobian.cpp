#include "milnor/jacobian.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "milnor/errors.hpp"
#include "milnor/internal/powers.hpp"

namespace milnor {
namespace {

void check_dimension(const MixedPolynomial& f, const Point& z) {
  if (z.size() != f.num_vars())
    throw InputError("point has " + std::to_string(z.size()) + " coordinates, polynomial has " +
                     std::to_string(f.num_vars()) + " variables");
}

// Accumulates f(z) and the Wirtinger pair. Per term, factor j of the monomial
// is z_j^nu_j zbar_j^mu_j; prefix/suffix products give the monomial with
// factor j removed without dividing by z_j.
void accumulate(const MixedPolynomial& f, const Point& z, Complex& value,
                Eigen::VectorXcd& dz, Eigen::VectorXcd& dzbar) {
  const int n = f.num_vars();
  value = 0.0;
  dz = Eigen::VectorXcd::Zero(n);
  dzbar = Eigen::VectorXcd::Zero(n);
  std::vector<Complex> factor(n), prefix(n + 1), suffix(n + 1);
  for (const auto& t : f.terms()) {
    for (int j = 0; j < n; ++j)
      factor[j] = internal::ipow(z[j], t.nu[j]) * internal::ipow(std::conj(z[j]), t.mu[j]);
    prefix[0] = 1.0;
    for (int j = 0; j < n; ++j) prefix[j + 1] = prefix[j] * factor[j];
    suffix[n] = 1.0;
    for (int j = n - 1; j >= 0; --j) suffix[j] = suffix[j + 1] * factor[j];
    value += t.coeff * prefix[n];
    for (int j = 0; j < n; ++j) {
      const Complex others = t.coeff * prefix[j] * suffix[j + 1];
      const Complex zj = z[j];
      const Complex zbj = std::conj(zj);
      if (t.nu[j] > 0)
        dz[j] += others * static_cast<double>(t.nu[j]) * internal::ipow(zj, t.nu[j] - 1) *
                 internal::ipow(zbj, t.mu[j]);
      if (t.mu[j] > 0)
        dzbar[j] += others * static_cast<double>(t.mu[j]) * internal::ipow(zj, t.nu[j]) *
                    internal::ipow(zbj, t.mu[j] - 1);
    }
  }
}

}  // namespace

WirtingerDerivatives wirtinger_derivatives(const MixedPolynomial& f, const Point& z) {
  check_dimension(f, z);
  WirtingerDerivatives d;
  Complex value;
  accumulate(f, z, value, d.dz, d.dzbar);
  return d;
}

RealJacobian to_real_jacobian(const WirtingerDerivatives& d) {
  const Eigen::Index n = d.dz.size();
  RealJacobian j(2, 2 * n);
  const Complex i(0.0, 1.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex dx = d.dz[k] + d.dzbar[k];
    const Complex dy = i * (d.dz[k] - d.dzbar[k]);
    j(0, 2 * k) = dx.real();
    j(1, 2 * k) = dx.imag();
    j(0, 2 * k + 1) = dy.real();
    j(1, 2 * k + 1) = dy.imag();
  }
  return j;
}

RealJacobian wirtinger_jacobian(const MixedPolynomial& f, const Point& z) {
  return to_real_jacobian(wirtinger_derivatives(f, z));
}

Linearization linearize(const MixedPolynomial& f, const Point& z) {
  check_dimension(f, z);
  WirtingerDerivatives d;
  Linearization out;
  accumulate(f, z, out.value, d.dz, d.dzbar);
  out.jacobian = to_real_jacobian(d);
  return out;
}

Eigen::Vector2d singular_values(const RealJacobian& j) {
  const double a = j.row(0).squaredNorm();
  const double c = j.row(1).squaredNorm();
  const double b = j.row(0).dot(j.row(1));
  const double lmax = 0.5 * (a + c) + std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  if (lmax <= 0.0) return Eigen::Vector2d::Zero();
  // det(J J^T) as a sum of squared 2x2 minors (Cauchy-Binet) avoids the
  // cancellation in a*c - b*b near rank one.
  double det = 0.0;
  const Eigen::Index m = j.cols();
  for (Eigen::Index p = 0; p < m; ++p)
    for (Eigen::Index q = p + 1; q < m; ++q) {
      const double minor = j(0, p) * j(1, q) - j(0, q) * j(1, p);
      det += minor * minor;
    }
  return {std::sqrt(lmax), std::sqrt(det / lmax)};
}

bool is_mixed_regular_point(const MixedPolynomial& f, const Point& z, double tol) {
  return singular_values(wirtinger_jacobian(f, z))[1] > tol;
}

Eigen::VectorXd to_real(const Point& z) {
  Eigen::VectorXd x(2 * z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    x[2 * k] = z[k].real();
    x[2 * k + 1] = z[k].imag();
  }
  return x;
}

Point to_complex(const Eigen::VectorXd& x) {
  Point z(x.size() / 2);
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = Complex(x[2 * k], x[2 * k + 1]);
  return z;
}

}  // namespace milnor

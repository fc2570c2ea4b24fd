#include "milnor/mixed_polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>

#include "milnor/errors.hpp"
#include "milnor/internal/powers.hpp"

namespace milnor {

Exponent MixedTerm::radial_exponent() const {
  Exponent e(nu.size());
  for (std::size_t j = 0; j < nu.size(); ++j) e[j] = nu[j] + mu[j];
  return e;
}

int MixedTerm::total_degree() const {
  return std::accumulate(nu.begin(), nu.end(), 0) + std::accumulate(mu.begin(), mu.end(), 0);
}

MixedPolynomial::MixedPolynomial(int n) : n_(n) {
  if (n < 1) throw InputError("a mixed polynomial needs at least one variable");
}

MixedPolynomial::MixedPolynomial(int n, std::vector<MixedTerm> terms)
    : n_(n), terms_(std::move(terms)) {
  if (n < 1) throw InputError("a mixed polynomial needs at least one variable");
  for (const auto& t : terms_) {
    if (static_cast<int>(t.nu.size()) != n || static_cast<int>(t.mu.size()) != n)
      throw InputError("exponent vector length differs from n = " + std::to_string(n));
    for (std::size_t j = 0; j < t.nu.size(); ++j)
      if (t.nu[j] < 0 || t.mu[j] < 0) throw InputError("negative exponent");
  }
  canonicalize();
}

MixedPolynomial MixedPolynomial::constant(int n, Complex c) {
  return MixedPolynomial(n, {MixedTerm{c, Exponent(n, 0), Exponent(n, 0)}});
}

MixedPolynomial MixedPolynomial::variable(int n, int j) {
  if (j < 0 || j >= n) throw InputError("variable index out of range");
  MixedTerm t{Complex(1.0, 0.0), Exponent(n, 0), Exponent(n, 0)};
  t.nu[j] = 1;
  return MixedPolynomial(n, {t});
}

MixedPolynomial MixedPolynomial::conjugate_variable(int n, int j) {
  if (j < 0 || j >= n) throw InputError("variable index out of range");
  MixedTerm t{Complex(1.0, 0.0), Exponent(n, 0), Exponent(n, 0)};
  t.mu[j] = 1;
  return MixedPolynomial(n, {t});
}

void MixedPolynomial::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), [](const MixedTerm& a, const MixedTerm& b) {
    return std::tie(a.nu, a.mu) < std::tie(b.nu, b.mu);
  });
  std::vector<MixedTerm> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().nu == t.nu && merged.back().mu == t.mu) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const MixedTerm& t) { return t.coeff == Complex(0.0, 0.0); });
  terms_ = std::move(merged);
}

bool MixedPolynomial::is_holomorphic() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [](const MixedTerm& t) {
    return std::all_of(t.mu.begin(), t.mu.end(), [](int e) { return e == 0; });
  });
}

bool MixedPolynomial::is_constant() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const MixedTerm& t) { return t.total_degree() == 0; });
}

int MixedPolynomial::min_total_degree() const noexcept {
  int d = terms_.empty() ? 0 : terms_.front().total_degree();
  for (const auto& t : terms_) d = std::min(d, t.total_degree());
  return d;
}

int MixedPolynomial::max_total_degree() const noexcept {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.total_degree());
  return d;
}

MixedPolynomial MixedPolynomial::conjugate() const {
  MixedPolynomial out(n_);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({std::conj(t.coeff), t.mu, t.nu});
  out.canonicalize();
  return out;
}

MixedPolynomial MixedPolynomial::pow(int k) const {
  if (k < 0) throw InputError("negative power of a polynomial");
  MixedPolynomial result = constant(n_, 1.0);
  MixedPolynomial base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return result;
}

MixedPolynomial& MixedPolynomial::operator+=(const MixedPolynomial& other) {
  if (other.n_ != n_) throw InputError("adding polynomials in different numbers of variables");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

MixedPolynomial& MixedPolynomial::operator-=(const MixedPolynomial& other) {
  return *this += -other;
}

MixedPolynomial& MixedPolynomial::operator*=(const MixedPolynomial& other) {
  if (other.n_ != n_) throw InputError("multiplying polynomials in different numbers of variables");
  std::vector<MixedTerm> product;
  product.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      MixedTerm t{a.coeff * b.coeff, a.nu, a.mu};
      for (int j = 0; j < n_; ++j) {
        t.nu[j] += b.nu[j];
        t.mu[j] += b.mu[j];
      }
      product.push_back(std::move(t));
    }
  }
  terms_ = std::move(product);
  canonicalize();
  return *this;
}

MixedPolynomial& MixedPolynomial::operator*=(Complex c) {
  for (auto& t : terms_) t.coeff *= c;
  canonicalize();
  return *this;
}

Complex evaluate(const MixedPolynomial& f, const Point& z) {
  if (z.size() != f.num_vars())
    throw InputError("point has " + std::to_string(z.size()) + " coordinates, polynomial has " +
                     std::to_string(f.num_vars()) + " variables");
  Complex sum(0.0, 0.0);
  for (const auto& t : f.terms()) {
    Complex m = t.coeff;
    for (int j = 0; j < f.num_vars(); ++j) {
      if (t.nu[j] != 0) m *= internal::ipow(z[j], t.nu[j]);
      if (t.mu[j] != 0) m *= internal::ipow(std::conj(z[j]), t.mu[j]);
    }
    sum += m;
  }
  return sum;
}

void check_subset(const Subset& subset, int n) {
  for (std::size_t k = 0; k < subset.size(); ++k) {
    if (subset[k] < 0 || subset[k] >= n)
      throw InputError("variable index " + std::to_string(subset[k] + 1) + " out of range 1.." +
                       std::to_string(n));
    if (k > 0 && subset[k] <= subset[k - 1]) throw InputError("subset must be sorted and unique");
  }
}

Subset complement(const Subset& subset, int n) {
  Subset out;
  for (int j = 0; j < n; ++j)
    if (!std::binary_search(subset.begin(), subset.end(), j)) out.push_back(j);
  return out;
}

MixedPolynomial restrict_to_subspace(const MixedPolynomial& f, const Subset& subset) {
  if (subset.empty()) throw InputError("restriction to an empty coordinate subspace");
  check_subset(subset, f.num_vars());
  const int m = static_cast<int>(subset.size());
  const Subset outside = complement(subset, f.num_vars());
  std::vector<MixedTerm> kept;
  for (const auto& t : f.terms()) {
    bool survives = std::all_of(outside.begin(), outside.end(),
                                [&](int j) { return t.nu[j] == 0 && t.mu[j] == 0; });
    if (!survives) continue;
    MixedTerm r{t.coeff, Exponent(m), Exponent(m)};
    for (int k = 0; k < m; ++k) {
      r.nu[k] = t.nu[subset[k]];
      r.mu[k] = t.mu[subset[k]];
    }
    kept.push_back(std::move(r));
  }
  return MixedPolynomial(m, std::move(kept));
}

MixedPolynomial substitute(const MixedPolynomial& f, const Subset& fixed, const Point& values) {
  check_subset(fixed, f.num_vars());
  if (values.size() != static_cast<Eigen::Index>(fixed.size()))
    throw InputError("substitute: one value per fixed variable required");
  const Subset free_vars = complement(fixed, f.num_vars());
  if (free_vars.empty()) throw InputError("substitute: no free variables left");
  const int m = static_cast<int>(free_vars.size());
  std::vector<MixedTerm> out;
  out.reserve(f.terms().size());
  for (const auto& t : f.terms()) {
    Complex c = t.coeff;
    for (std::size_t k = 0; k < fixed.size(); ++k) {
      const int j = fixed[k];
      if (t.nu[j] != 0) c *= internal::ipow(values[k], t.nu[j]);
      if (t.mu[j] != 0) c *= internal::ipow(std::conj(values[k]), t.mu[j]);
    }
    MixedTerm r{c, Exponent(m), Exponent(m)};
    for (int k = 0; k < m; ++k) {
      r.nu[k] = t.nu[free_vars[k]];
      r.mu[k] = t.mu[free_vars[k]];
    }
    out.push_back(std::move(r));
  }
  return MixedPolynomial(m, std::move(out));
}

Point embed(const Point& z_subset, const Subset& subset, int n) {
  check_subset(subset, n);
  if (z_subset.size() != static_cast<Eigen::Index>(subset.size()))
    throw InputError("embed: coordinate count differs from subset size");
  Point z = Point::Zero(n);
  for (std::size_t k = 0; k < subset.size(); ++k) z[subset[k]] = z_subset[k];
  return z;
}

}  // namespace milnor

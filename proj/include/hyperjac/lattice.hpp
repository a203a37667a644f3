#ifndef HYPERJAC_LATTICE_HPP
#define HYPERJAC_LATTICE_HPP

// Ellipsoid enumeration over Z^g and Gaussian tail bounds for lattice sums.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hyperjac {

class LatticeCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace lattice {

template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Calls visit(k) for every k in Z^g with |U (k - center)|^2 <= r2, where U is
/// upper triangular with positive diagonal. Returns the number of points.
template <typename Real, typename Visit>
std::size_t enumerate_ellipsoid(const RMatrix<Real>& U, const RVector<Real>& center, Real r2,
                                std::size_t cap, Visit&& visit) {
  const int g = static_cast<int>(U.rows());
  Eigen::VectorXi k(g);
  std::size_t count = 0;

  auto rec = [&](auto&& self, int i, Real above) -> void {
    Real t = 0;
    for (int j = i + 1; j < g; ++j) t += U(i, j) * (static_cast<Real>(k[j]) - center[j]);
    const Real rem = r2 - above;
    if (rem < 0) return;
    const Real half = std::sqrt(rem) / U(i, i);
    const Real mid = center[i] - t / U(i, i);
    const Real lo = std::ceil(mid - half);
    const Real hi = std::floor(mid + half);
    if (hi - lo > static_cast<Real>(cap))
      throw LatticeCapExceeded("lattice ellipsoid too wide along one axis");
    for (Real kv = lo; kv <= hi; kv += 1) {
      k[i] = static_cast<int>(kv);
      const Real d = U(i, i) * (kv - center[i]) + t;
      if (i == 0) {
        if (++count > cap)
          throw LatticeCapExceeded("lattice ellipsoid holds more than " + std::to_string(cap) +
                                   " points");
        visit(static_cast<const Eigen::VectorXi&>(k));
      } else {
        self(self, i - 1, above + d * d);
      }
    }
  };
  if (g > 0) rec(rec, g - 1, Real(0));
  return count;
}

/// Moments m_j = integral_a^inf t^j exp(-t^2) dt, j = 0..n, for a >= 0.
template <typename Real>
std::vector<Real> gaussian_tail_moments(int n, Real a) {
  using std::erfc;
  using std::exp;
  using std::pow;
  std::vector<Real> m(static_cast<std::size_t>(n + 1));
  const Real ea = exp(-a * a);
  const Real sqrt_pi = std::sqrt(static_cast<Real>(3.14159265358979323846264338327950288L));
  m[0] = sqrt_pi / 2 * erfc(a);
  if (n >= 1) m[1] = ea / 2;
  for (int j = 2; j <= n; ++j)
    m[static_cast<std::size_t>(j)] =
        static_cast<Real>(j - 1) / 2 * m[static_cast<std::size_t>(j - 2)] + pow(a, j - 1) * ea / 2;
  return m;
}

/// integral_a^inf p(t) exp(-t^2) dt with p given by ascending coefficients.
template <typename Real>
Real gaussian_tail_integral(const std::vector<Real>& poly, Real a) {
  if (poly.empty()) return 0;
  const auto m = gaussian_tail_moments(static_cast<int>(poly.size()) - 1, a);
  Real s = 0;
  for (std::size_t j = 0; j < poly.size(); ++j) s += poly[j] * m[j];
  return s;
}

/// Ascending coefficients of (t + h)^n.
template <typename Real>
std::vector<Real> shifted_power(int n, Real h) {
  std::vector<Real> c(static_cast<std::size_t>(n + 1), 0);
  Real binom = 1;
  for (int j = 0; j <= n; ++j) {
    c[static_cast<std::size_t>(j)] = binom * std::pow(h, n - j);
    binom = binom * static_cast<Real>(n - j) / static_cast<Real>(j + 1);
  }
  return c;
}

/// Bound on sum over points x of a translated lattice with |x| > R of
/// exp(-|x|^2) * (a0 + a1 |x|), where rho is the lattice minimum. Disjoint
/// balls of radius rho/2 around the points turn the sum into an integral.
/// Requires R >= rho; returns +inf otherwise.
template <typename Real>
Real packing_tail_bound(int g, Real rho, Real R, Real a0 = 1, Real a1 = 0) {
  if (!(R >= rho) || rho <= 0) return std::numeric_limits<Real>::infinity();
  const Real h = rho / 2;
  // r^{g-1} (a0 + a1 (r + h)) with r = t + h
  auto base = shifted_power<Real>(g - 1, h);
  std::vector<Real> poly(base.size() + 1, 0);
  for (std::size_t j = 0; j < base.size(); ++j) {
    poly[j] += base[j] * (a0 + a1 * rho);
    poly[j + 1] += base[j] * a1;
  }
  const Real ratio = static_cast<Real>(g) * std::pow(2 / rho, g);
  return ratio * gaussian_tail_integral(poly, R - rho);
}

}  // namespace lattice
}  // namespace hyperjac

#endif  // HYPERJAC_LATTICE_HPP

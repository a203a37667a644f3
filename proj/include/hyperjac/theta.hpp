#ifndef HYPERJAC_THETA_HPP
#define HYPERJAC_THETA_HPP

// Riemann theta functions on the Siegel upper half-space.
//
//   theta[eps;delta](tau, z) = sum_{m in Z^g} e[(n, tau n) + 2 (n, z + delta/2)],
//   n = m + eps/2,  e[x] = exp(pi i x).
//
// Sums run over the ellipsoid (n - c)^T Im(tau) (n - c) <= radius^2 with
// c = -Im(tau)^{-1} Im(z), which carries every term larger than
// eps_abs * exp(pi Im(z)^T Im(tau)^{-1} Im(z)). The radius is then grown until
// a packing bound certifies the omitted tail below the same envelope.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "hyperjac/char_algebra.hpp"
#include "hyperjac/lattice.hpp"

namespace hyperjac {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RMatrix = lattice::RMatrix<Real>;
template <typename Real>
using RVector = lattice::RVector<Real>;

class IdentityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncation request and report. eps_abs, kappa, min_radius and max_points are
/// inputs; radius, term_count, tail_bound and log_envelope are filled in by
/// every evaluation.
struct TruncationSpec {
  double eps_abs = 1e-14;
  double kappa = 5.0;
  double min_radius = 0.0;
  std::size_t max_points = 100'000'000;

  double radius = 0.0;
  std::size_t term_count = 0;
  double tail_bound = 0.0;
  double log_envelope = 0.0;
};

template <typename Real>
class PeriodMatrix {
 public:
  /// Validates symmetry (relative 1e-12 entrywise) and Im(tau) > 0, stores the
  /// symmetrized matrix.
  explicit PeriodMatrix(const CMatrix<Real>& entries) {
    if (entries.rows() == 0 || entries.rows() != entries.cols())
      throw std::invalid_argument("period matrix must be square and non-empty");
    if (!entries.allFinite()) throw std::invalid_argument("period matrix has non-finite entries");
    const Real scale = entries.cwiseAbs().maxCoeff();
    const Real tol = Real(1e-12);
    for (Eigen::Index i = 0; i < entries.rows(); ++i)
      for (Eigen::Index j = i + 1; j < entries.cols(); ++j) {
        const Real d = std::abs(entries(i, j) - entries(j, i));
        const Real ref = std::max({std::abs(entries(i, j)), std::abs(entries(j, i)), scale * tol});
        if (d > tol * ref)
          throw std::invalid_argument("period matrix is not symmetric at (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")");
      }
    tau_ = (entries + entries.transpose()) / Real(2);
    imag_ = tau_.imag();
    Eigen::SelfAdjointEigenSolver<RMatrix<Real>> es(imag_, Eigen::EigenvaluesOnly);
    min_eig_ = es.eigenvalues()(0);
    if (!(min_eig_ > 0))
      throw std::invalid_argument("imaginary part of period matrix is not positive definite");
    Eigen::LLT<RMatrix<Real>> llt(imag_);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("imaginary part of period matrix is not positive definite");
    chol_ = llt.matrixU();
    imag_inv_ = llt.solve(RMatrix<Real>::Identity(genus(), genus()));
    rho_ = compute_shortest_vector();
  }

  int genus() const { return static_cast<int>(tau_.rows()); }
  const CMatrix<Real>& matrix() const { return tau_; }
  const RMatrix<Real>& imag() const { return imag_; }
  const RMatrix<Real>& imag_inverse() const { return imag_inv_; }
  /// Upper triangular U with Im(tau) = U^T U.
  const RMatrix<Real>& imag_cholesky() const { return chol_; }
  Real min_imag_eigenvalue() const { return min_eig_; }
  /// Shortest nonzero lattice vector length in the metric pi * Im(tau).
  Real shortest_vector() const { return rho_; }

  /// s * tau, reusing the factorizations.
  PeriodMatrix scaled(Real s) const {
    if (!(s > 0)) throw std::invalid_argument("period matrix scale must be positive");
    PeriodMatrix out(*this);
    out.tau_ *= s;
    out.imag_ *= s;
    out.imag_inv_ /= s;
    out.chol_ *= std::sqrt(s);
    out.min_eig_ *= s;
    out.rho_ *= std::sqrt(s);
    return out;
  }

 private:
  Real compute_shortest_vector() const {
    const int g = genus();
    Real r2 = imag_.diagonal().minCoeff() * (1 + Real(1e-9));
    Real best = r2;
    RVector<Real> zero = RVector<Real>::Zero(g);
    lattice::enumerate_ellipsoid<Real>(chol_, zero, r2, std::size_t{10'000'000},
                                       [&](const Eigen::VectorXi& k) {
                                         if (k.isZero()) return;
                                         RVector<Real> v = k.cast<Real>();
                                         best = std::min(best, Real(v.dot(imag_ * v)));
                                       });
    return std::sqrt(std::numbers::pi_v<Real> * best);
  }

  CMatrix<Real> tau_;
  RMatrix<Real> imag_;
  RMatrix<Real> imag_inv_;
  RMatrix<Real> chol_;
  Real min_eig_ = 0;
  Real rho_ = 0;
};

template <typename Real>
struct Evaluation {
  std::complex<Real> value;
  TruncationSpec truncation;
};

template <typename Real>
struct KummerVector {
  CVector<Real> coords;  // indexed by BinaryVector::mask()
  TruncationSpec truncation;
};

template <typename Real>
struct GradientEvaluation {
  CVector<Real> value;
  TruncationSpec truncation;
};

namespace detail {

template <typename Real>
RVector<Real> to_real(const BinaryVector& v) {
  RVector<Real> out(v.size());
  for (int i = 0; i < v.size(); ++i) out[i] = static_cast<Real>(v[i]);
  return out;
}

template <typename Real>
std::complex<Real> expi_pi(const std::complex<Real>& x) {
  return std::exp(std::complex<Real>(0, std::numbers::pi_v<Real>) * x);
}

template <typename Real, typename Derived>
CVector<Real> as_vector(const Eigen::MatrixBase<Derived>& z, int genus) {
  CVector<Real> out = z.template cast<std::complex<Real>>();
  if (out.size() != genus)
    throw std::invalid_argument("argument has length " + std::to_string(out.size()) +
                                ", genus is " + std::to_string(genus));
  if (!out.allFinite()) throw std::invalid_argument("argument has non-finite entries");
  return out;
}

/// Picks the radius (in the pi*Im(tau) metric) for a lattice sum and
/// fills the report fields that do not depend on the summation itself.
template <typename Real>
Real choose_radius(const PeriodMatrix<Real>& tau, TruncationSpec& spec, Real grad_c = -1) {
  if (!(spec.eps_abs > 0)) throw std::invalid_argument("eps_abs must be positive");
  const int g = tau.genus();
  const Real rho = tau.shortest_vector();
  const Real pi = std::numbers::pi_v<Real>;
  Real R = std::sqrt(std::max(Real(0), std::log(Real(1) / Real(spec.eps_abs)) + Real(spec.kappa)));
  R = std::max({R, rho, std::sqrt(pi) * Real(spec.min_radius)});
  auto bound = [&](Real r) {
    if (grad_c < 0) return lattice::packing_tail_bound<Real>(g, rho, r);
    const Real tinv = 1 / std::sqrt(pi * tau.min_imag_eigenvalue());
    return 2 * pi * lattice::packing_tail_bound<Real>(g, rho, r, grad_c, tinv);
  };
  int guard = 0;
  while (bound(R) > Real(spec.eps_abs)) {
    R *= Real(1.02);
    if (++guard > 5000) throw LatticeCapExceeded("tail bound does not converge");
  }
  spec.radius = static_cast<double>(R / std::sqrt(pi));
  spec.tail_bound = static_cast<double>(bound(R));  // relative to the envelope for now
  return R;
}

}  // namespace detail

/// pi * Im(z)^T Im(tau)^{-1} Im(z): log of the growth envelope of theta at z.
template <typename Real, typename Derived>
Real log_envelope(const PeriodMatrix<Real>& tau, const Eigen::MatrixBase<Derived>& z) {
  const CVector<Real> zz = detail::as_vector<Real>(z, tau.genus());
  const RVector<Real> y = zz.imag();
  return std::numbers::pi_v<Real> * y.dot(tau.imag_inverse() * y);
}

/// Point (tau a + b)/2 for integer vectors a, b.
template <typename Real>
CVector<Real> half_period(const PeriodMatrix<Real>& tau, const Eigen::VectorXi& a,
                          const Eigen::VectorXi& b) {
  if (a.size() != tau.genus() || b.size() != tau.genus())
    throw std::invalid_argument("half period vectors must have length genus");
  return (tau.matrix() * a.cast<std::complex<Real>>() + b.cast<std::complex<Real>>()) / Real(2);
}

template <typename Real>
CVector<Real> half_period(const PeriodMatrix<Real>& tau, const Characteristic& c) {
  Eigen::VectorXi a(c.size()), b(c.size());
  for (int i = 0; i < c.size(); ++i) {
    a[i] = c.eps[i];
    b[i] = c.delta[i];
  }
  return half_period(tau, a, b);
}

/// Direct half-integer lattice sum for theta[eps;delta](tau, z).
template <typename Real, typename Derived>
Evaluation<Real> theta_char(const PeriodMatrix<Real>& tau, const Eigen::MatrixBase<Derived>& z_in,
                            const Characteristic& c, TruncationSpec spec = {}) {
  const int g = tau.genus();
  if (c.size() != g) throw std::invalid_argument("characteristic length differs from genus");
  const CVector<Real> z = detail::as_vector<Real>(z_in, g);
  const RVector<Real> y = z.imag();
  const RVector<Real> eps_half = detail::to_real<Real>(c.eps) / Real(2);
  const CVector<Real> shift = z + detail::to_real<Real>(c.delta).template cast<std::complex<Real>>() / Real(2);
  const RVector<Real> center = -(tau.imag_inverse() * y);

  const Real R = detail::choose_radius(tau, spec);
  const Real log_env = std::numbers::pi_v<Real> * y.dot(tau.imag_inverse() * y);
  const CMatrix<Real>& T = tau.matrix();

  std::complex<Real> sum = 0;
  RVector<Real> n(g);
  spec.term_count = lattice::enumerate_ellipsoid<Real>(
      tau.imag_cholesky(), RVector<Real>(center - eps_half), R * R / std::numbers::pi_v<Real>,
      spec.max_points, [&](const Eigen::VectorXi& m) {
        n = m.cast<Real>() + eps_half;
        std::complex<Real> q = 0;
        for (int i = 0; i < g; ++i) {
          std::complex<Real> row = 0;
          for (int j = 0; j < g; ++j) row += T(i, j) * n[j];
          q += n[i] * (row + Real(2) * shift[i]);
        }
        sum += detail::expi_pi(q);
      });
  spec.log_envelope = static_cast<double>(log_env);
  spec.tail_bound *= std::exp(static_cast<double>(log_env));
  return {sum, spec};
}

template <typename Real, typename Derived>
Evaluation<Real> theta(const PeriodMatrix<Real>& tau, const Eigen::MatrixBase<Derived>& z,
                       TruncationSpec spec = {}) {
  const auto zero = BinaryVector::zero(tau.genus());
  return theta_char(tau, z, Characteristic(zero, zero), spec);
}

/// theta[eps;delta] through Riemann's theta at the shifted argument
/// z + (tau eps + delta)/2; an independent route to theta_char:
///   theta[eps;delta](z) = e[(eps,delta)/2 + (eps,tau eps)/4 + (eps,z)] theta(z + (tau eps + delta)/2).
template <typename Real, typename Derived>
Evaluation<Real> theta_char_via_shift(const PeriodMatrix<Real>& tau,
                                      const Eigen::MatrixBase<Derived>& z_in,
                                      const Characteristic& c, TruncationSpec spec = {}) {
  const int g = tau.genus();
  const CVector<Real> z = detail::as_vector<Real>(z_in, g);
  const CVector<Real> eps = detail::to_real<Real>(c.eps).template cast<std::complex<Real>>();
  auto shifted = theta(tau, CVector<Real>(z + half_period(tau, c)), spec);
  const std::complex<Real> expo = eps.dot(tau.matrix() * eps) / Real(4) + eps.dot(z);
  // eps is real, so dot() (which conjugates its first argument) is the bilinear product.
  // The constant is e[(eps,delta)/2] with the integer product, a power of i.
  int overlap = 0;
  for (int i = 0; i < g; ++i) overlap += c.eps[i] & c.delta[i];
  static constexpr std::complex<Real> powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::complex<Real> factor = powers[overlap % 4] * detail::expi_pi(expo);
  shifted.value *= factor;
  shifted.truncation.tail_bound *= static_cast<double>(std::abs(factor));
  return shifted;
}

/// Second-order theta Theta[eps](tau, z) = theta[eps;0](2 tau, 2 z).
template <typename Real, typename Derived>
Evaluation<Real> theta2(const PeriodMatrix<Real>& tau, const Eigen::MatrixBase<Derived>& z,
                        const BinaryVector& eps, TruncationSpec spec = {}) {
  const CVector<Real> zz = detail::as_vector<Real>(z, tau.genus());
  return theta_char(tau.scaled(2), CVector<Real>(Real(2) * zz),
                    Characteristic(eps, BinaryVector::zero(tau.genus())), spec);
}

/// Kummer image K(z) = (Theta[eps](tau, z))_eps in enumerate() order. The
/// reported truncation carries the largest tail bound and the total term count.
template <typename Real, typename Derived>
KummerVector<Real> kummer(const PeriodMatrix<Real>& tau, const Eigen::MatrixBase<Derived>& z,
                          TruncationSpec spec = {}) {
  const int g = tau.genus();
  const CVector<Real> z2 = Real(2) * detail::as_vector<Real>(z, g);
  const PeriodMatrix<Real> tau2 = tau.scaled(2);
  const auto zero = BinaryVector::zero(g);
  KummerVector<Real> out;
  out.coords.resize(Eigen::Index{1} << g);
  TruncationSpec report = spec;
  report.term_count = 0;
  report.tail_bound = 0;
  for (const auto& eps : enumerate(g)) {
    auto ev = theta_char(tau2, z2, Characteristic(eps, zero), spec);
    out.coords[static_cast<Eigen::Index>(eps.mask())] = ev.value;
    report.radius = ev.truncation.radius;
    report.log_envelope = ev.truncation.log_envelope;
    report.term_count += ev.truncation.term_count;
    report.tail_bound = std::max(report.tail_bound, ev.truncation.tail_bound);
  }
  out.truncation = report;
  if (out.coords.cwiseAbs().maxCoeff() == Real(0))
    throw std::runtime_error("Kummer vector evaluated to zero: numerics fault");
  return out;
}

/// Theta[delta](tau, z + (tau a + b)/2) together with the closed-form route
/// (-1)^{(delta,b)} e[-(a,tau a)/2 - 2(a,z)] Theta[delta+a](tau, z).
template <typename Real>
struct ShiftedThetaEvaluation {
  std::complex<Real> value;
  std::complex<Real> via_closed_form;
  Real residual;
  TruncationSpec truncation;
};

template <typename Real, typename Derived>
ShiftedThetaEvaluation<Real> theta2_shifted(const PeriodMatrix<Real>& tau,
                                            const Eigen::MatrixBase<Derived>& z_in,
                                            const BinaryVector& delta, const BinaryVector& a,
                                            const BinaryVector& b, TruncationSpec spec = {},
                                            Real tolerance = Real(1e-9)) {
  const int g = tau.genus();
  const CVector<Real> z = detail::as_vector<Real>(z_in, g);
  const CVector<Real> av = detail::to_real<Real>(a).template cast<std::complex<Real>>();
  auto direct = theta2(tau, CVector<Real>(z + half_period(tau, Characteristic(a, b))), delta, spec);
  auto base = theta2(tau, z, delta + a, spec);
  const Real sign = dot_mod2(delta, b) ? Real(-1) : Real(1);
  const std::complex<Real> factor =
      sign * detail::expi_pi(std::complex<Real>(-av.dot(tau.matrix() * av) / Real(2) - Real(2) * av.dot(z)));
  const std::complex<Real> other = factor * base.value;
  const Real scale = std::abs(direct.value) + std::abs(other) +
                     Real(direct.truncation.tail_bound) +
                     std::abs(factor) * Real(base.truncation.tail_bound) +
                     std::numeric_limits<Real>::min();
  const Real residual = std::abs(direct.value - other) / scale;
  if (residual > tolerance)
    throw IdentityViolation("half-period shift rule violated, residual " + std::to_string(double(residual)));
  return {direct.value, other, residual, direct.truncation};
}

template <typename Real>
struct BilinearCheck {
  std::complex<Real> lhs;
  std::complex<Real> rhs;
  Real residual;
};

/// theta[c](z) theta[c](w) = (-1)^{(eps,delta)} sum_sigma (-1)^{(delta,sigma)}
///   Theta[sigma+eps]((z+w)/2) Theta[sigma]((z-w)/2);
/// the leading sign only matters for odd c.
/// residual |lhs - rhs| / (1 + |lhs| + |rhs|).
template <typename Real, typename DZ, typename DW>
BilinearCheck<Real> riemann_bilinear_check(const PeriodMatrix<Real>& tau, const Characteristic& c,
                                           const Eigen::MatrixBase<DZ>& z_in,
                                           const Eigen::MatrixBase<DW>& w_in,
                                           TruncationSpec spec = {}) {
  const int g = tau.genus();
  const CVector<Real> z = detail::as_vector<Real>(z_in, g);
  const CVector<Real> w = detail::as_vector<Real>(w_in, g);
  const std::complex<Real> lhs = theta_char(tau, z, c, spec).value * theta_char(tau, w, c, spec).value;
  const auto plus = kummer(tau, CVector<Real>((z + w) / Real(2)), spec).coords;
  const auto minus = kummer(tau, CVector<Real>((z - w) / Real(2)), spec).coords;
  std::complex<Real> rhs = 0;
  for (const auto& sigma : enumerate(g)) {
    const Real sign = dot_mod2(c.delta, sigma) ? Real(-1) : Real(1);
    rhs += sign * plus[static_cast<Eigen::Index>((sigma + c.eps).mask())] *
           minus[static_cast<Eigen::Index>(sigma.mask())];
  }
  if (parity(c) == Parity::odd) rhs = -rhs;
  return {lhs, rhs, std::abs(lhs - rhs) / (1 + std::abs(lhs) + std::abs(rhs))};
}

/// d theta[c] / d z_j by the termwise differentiated sum.
template <typename Real, typename Derived>
GradientEvaluation<Real> theta_gradient(const PeriodMatrix<Real>& tau,
                                        const Eigen::MatrixBase<Derived>& z_in,
                                        TruncationSpec spec = {},
                                        std::optional<Characteristic> c = std::nullopt) {
  const int g = tau.genus();
  const auto zero = BinaryVector::zero(g);
  const Characteristic ch = c.value_or(Characteristic(zero, zero));
  const CVector<Real> z = detail::as_vector<Real>(z_in, g);
  const RVector<Real> y = z.imag();
  const RVector<Real> eps_half = detail::to_real<Real>(ch.eps) / Real(2);
  const CVector<Real> shift = z + detail::to_real<Real>(ch.delta).template cast<std::complex<Real>>() / Real(2);
  const RVector<Real> center = -(tau.imag_inverse() * y);
  const Real R = detail::choose_radius(tau, spec, center.cwiseAbs().maxCoeff());
  const Real log_env = std::numbers::pi_v<Real> * y.dot(tau.imag_inverse() * y);
  const CMatrix<Real>& T = tau.matrix();
  const std::complex<Real> two_pi_i(0, 2 * std::numbers::pi_v<Real>);

  CVector<Real> grad = CVector<Real>::Zero(g);
  RVector<Real> n(g);
  spec.term_count = lattice::enumerate_ellipsoid<Real>(
      tau.imag_cholesky(), RVector<Real>(center - eps_half), R * R / std::numbers::pi_v<Real>,
      spec.max_points, [&](const Eigen::VectorXi& m) {
        n = m.cast<Real>() + eps_half;
        std::complex<Real> q = 0;
        for (int i = 0; i < g; ++i) {
          std::complex<Real> row = 0;
          for (int j = 0; j < g; ++j) row += T(i, j) * n[j];
          q += n[i] * (row + Real(2) * shift[i]);
        }
        const std::complex<Real> term = detail::expi_pi(q);
        for (int j = 0; j < g; ++j) grad[j] += two_pi_i * n[j] * term;
      });
  spec.log_envelope = static_cast<double>(log_env);
  spec.tail_bound *= std::exp(static_cast<double>(log_env));
  return {grad, spec};
}

/// Compares two Kummer vectors projectively: both are divided by their entry at
/// the index where |a| is largest, then the max entrywise difference is taken.
template <typename Real>
Real projective_distance(const CVector<Real>& a, const CVector<Real>& b) {
  if (a.size() != b.size() || a.size() == 0)
    throw std::invalid_argument("projective comparison needs equal non-empty vectors");
  Eigen::Index i = 0;
  a.cwiseAbs().maxCoeff(&i);
  if (b[i] == std::complex<Real>(0)) return std::numeric_limits<Real>::infinity();
  return (a / a[i] - b / b[i]).cwiseAbs().maxCoeff();
}

}  // namespace hyperjac

#endif  // HYPERJAC_THETA_HPP

#ifndef HYPERJAC_TESTS_ORACLES_HPP
#define HYPERJAC_TESTS_ORACLES_HPP

// Test-only reference computations. Nothing here goes through the library's
// ellipsoid enumeration or truncation logic.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// theta[eps;delta](tau, z) summed over the box |m_i| <= n_box.
inline cd box_theta(const CMat& tau, const CVec& z, const std::vector<int>& eps,
                    const std::vector<int>& delta, int n_box) {
  const int g = static_cast<int>(tau.rows());
  std::vector<int> m(static_cast<std::size_t>(g), -n_box);
  cd sum = 0;
  while (true) {
    Eigen::VectorXd n(g);
    for (int i = 0; i < g; ++i) n[i] = m[static_cast<std::size_t>(i)] + eps[static_cast<std::size_t>(i)] / 2.0;
    cd q = 0;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) q += n[i] * tau(i, j) * n[j];
    for (int i = 0; i < g; ++i) q += 2.0 * n[i] * (z[i] + delta[static_cast<std::size_t>(i)] / 2.0);
    sum += std::exp(cd(0, std::numbers::pi) * q);
    int i = 0;
    while (i < g && ++m[static_cast<std::size_t>(i)] > n_box) m[static_cast<std::size_t>(i++)] = -n_box;
    if (i == g) break;
  }
  return sum;
}

inline std::vector<int> bits(unsigned mask, int g) {
  std::vector<int> out(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) out[static_cast<std::size_t>(i)] = (mask >> (g - 1 - i)) & 1u;
  return out;
}

/// Second-order theta via the box sum.
inline cd box_theta2(const CMat& tau, const CVec& z, unsigned eps_mask, int n_box) {
  const int g = static_cast<int>(tau.rows());
  return box_theta(2.0 * tau, 2.0 * z, bits(eps_mask, g), std::vector<int>(static_cast<std::size_t>(g), 0), n_box);
}

/// tau = S + i (Q^T Q + g I), S symmetric in [-0.4,0.4], Q in [-0.3,0.3].
inline CMat random_siegel(int g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> us(-0.4, 0.4), uq(-0.3, 0.3);
  Eigen::MatrixXd S(g, g), Q(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j <= i; ++j) S(i, j) = S(j, i) = us(rng);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) Q(i, j) = uq(rng);
  Eigen::MatrixXd Y = Q.transpose() * Q + g * Eigen::MatrixXd::Identity(g, g);
  return S.cast<cd>() + cd(0, 1) * Y.cast<cd>();
}

/// Random point with real part in [0,1)^g and Im z = Im(tau) u, u in [-1/2,1/2]^g.
inline CVec random_point(const CMat& tau, std::mt19937_64& rng) {
  const int g = static_cast<int>(tau.rows());
  std::uniform_real_distribution<double> ux(0.0, 1.0), uu(-0.5, 0.5);
  Eigen::VectorXd x(g), u(g);
  for (int i = 0; i < g; ++i) {
    x[i] = ux(rng);
    u[i] = uu(rng);
  }
  Eigen::VectorXd y = tau.imag() * u;
  return x.cast<cd>() + cd(0, 1) * y.cast<cd>();
}

inline double rel_diff(cd a, cd b) { return std::abs(a - b) / (std::abs(a) + std::abs(b) + 1e-300); }

}  // namespace oracle

#endif

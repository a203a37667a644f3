#ifndef HYPERJAC_PERIODS_HPP
#define HYPERJAC_PERIODS_HPP

// Periods of y^2 = prod (x - p_i) for real branch points p_1 < ... < p_{2g+2}.
//
// Basis: a_i circles the cut [p_{2i-1}, p_{2i}], b_i runs through p_{2i} and
// p_{2i+1}. Every cycle is a signed sum of the segment integrals
//   P_k = 2 i^{k-2g-2} int_{p_k}^{p_{k+1}} x^{j-1} dx / sqrt|prod (x - p_i)|,
// with a_i = P_1 + P_3 + ... + P_{2i-1} and b_i = P_{2i}.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperjac/char_algebra.hpp"
#include "hyperjac/theta.hpp"

namespace hyperjac {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BranchConfig {
 public:
  explicit BranchConfig(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 6 || points_.size() % 2 != 0)
      throw std::invalid_argument("branch configuration needs an even number (>= 6) of points, got " +
                                  std::to_string(points_.size()));
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!std::isfinite(points_[i])) throw std::invalid_argument("branch point is not finite");
      if (i > 0 && !(points_[i] > points_[i - 1]))
        throw std::invalid_argument("branch points must be strictly increasing");
    }
  }

  int genus() const { return static_cast<int>(points_.size() / 2) - 1; }
  const std::vector<double>& points() const { return points_; }

 private:
  std::vector<double> points_;
};

/// p_1 ~ U[-3,0], consecutive gaps ~ U[0.5,1.5].
inline BranchConfig random_branch_config(int genus, std::mt19937_64& rng) {
  if (genus < 2) throw std::invalid_argument("genus must be at least 2");
  std::uniform_real_distribution<double> start(-3.0, 0.0), gap(0.5, 1.5);
  std::vector<double> p(static_cast<std::size_t>(2 * genus + 2));
  p[0] = start(rng);
  for (std::size_t i = 1; i < p.size(); ++i) p[i] = p[i - 1] + gap(rng);
  return BranchConfig(std::move(p));
}

template <typename Real>
struct PeriodData {
  CMatrix<Real> a_periods;
  CMatrix<Real> b_periods;
  PeriodMatrix<Real> tau;
  int quad_nodes;
  Real convergence_delta;  // max entry change under node doubling / max entry
};

namespace detail {

/// Columns k = 0..2g: P_{k+1} as a length-g vector over the differentials.
template <typename Real>
CMatrix<Real> segment_periods(const std::vector<double>& p, int nodes) {
  const int n2 = static_cast<int>(p.size());
  const int g = n2 / 2 - 1;
  const Real pi = std::numbers::pi_v<Real>;
  std::vector<Real> t(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) t[static_cast<std::size_t>(i)] = std::cos((2 * i + 1) * pi / (2 * nodes));

  CMatrix<Real> out(g, n2 - 1);
  for (int k = 0; k + 1 < n2; ++k) {
    const Real a = p[static_cast<std::size_t>(k)], b = p[static_cast<std::size_t>(k + 1)];
    const Real mid = (a + b) / 2, half = (b - a) / 2;
    RVector<Real> J = RVector<Real>::Zero(g);
    for (Real ti : t) {
      const Real x = mid + half * ti;
      Real others = 1;
      for (int i = 0; i < n2; ++i)
        if (i != k && i != k + 1) others *= x - Real(p[static_cast<std::size_t>(i)]);
      Real w = 1 / std::sqrt(std::abs(others));
      for (int j = 0; j < g; ++j, w *= x) J[j] += w;
    }
    J *= pi / nodes;
    // i^{k+1-n2}: the factor sqrt(-1) for each sign change of the product left of x
    static constexpr int kQuarter[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int e = (((k + 1 - n2) % 4) + 4) % 4;
    const std::complex<Real> phase(kQuarter[e][0], kQuarter[e][1]);
    out.col(k) = Real(2) * phase * J.template cast<std::complex<Real>>();
  }
  return out;
}

template <typename Real>
void assemble(const CMatrix<Real>& P, CMatrix<Real>& A, CMatrix<Real>& B) {
  const int g = static_cast<int>(P.rows());
  A.resize(g, g);
  B.resize(g, g);
  CVector<Real> acc = CVector<Real>::Zero(g);
  for (int i = 0; i < g; ++i) {
    acc += P.col(2 * i);
    A.col(i) = acc;
    B.col(i) = P.col(2 * i + 1);
  }
}

}  // namespace detail

/// Normalized period matrix tau = A^{-1} B. Throws QuadratureError when node
/// doubling moves the periods by more than 1e-9 relative, InvariantViolation
/// when tau is not symmetric (1e-8) with positive definite imaginary part.
template <typename Real = double>
PeriodData<Real> period_matrix(const BranchConfig& cfg, int quad_nodes = 256) {
  if (quad_nodes < 1) throw std::invalid_argument("quadrature node count must be positive");
  const CMatrix<Real> coarse = detail::segment_periods<Real>(cfg.points(), quad_nodes);
  const CMatrix<Real> fine = detail::segment_periods<Real>(cfg.points(), 2 * quad_nodes);
  const Real delta = (fine - coarse).cwiseAbs().maxCoeff() / fine.cwiseAbs().maxCoeff();
  if (!(delta < Real(1e-9)))
    throw QuadratureError("period quadrature not converged at " + std::to_string(quad_nodes) +
                          " nodes: doubling changes periods by " + std::to_string(double(delta)));

  CMatrix<Real> A, B;
  detail::assemble(fine, A, B);
  Eigen::PartialPivLU<CMatrix<Real>> lu(A);
  CMatrix<Real> tau = lu.solve(B);
  // Orientation of the b-cycles: flip if it makes Im(tau) negative definite.
  RMatrix<Real> Y = (tau.imag() + tau.imag().transpose()) / 2;
  if (Eigen::SelfAdjointEigenSolver<RMatrix<Real>>(Y, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff() < 0) {
    B = -B;
    tau = -tau;
  }
  const Real asym = (tau - tau.transpose()).cwiseAbs().maxCoeff() / tau.cwiseAbs().maxCoeff();
  if (!(asym < Real(1e-8)))
    throw InvariantViolation("period matrix not symmetric (relative asymmetry " +
                             std::to_string(double(asym)) + "): sheet sign bookkeeping is wrong");
  try {
    const CMatrix<Real> sym = (tau + tau.transpose()) / Real(2);
    return {A, B, PeriodMatrix<Real>(sym), 2 * quad_nodes, delta};
  } catch (const std::invalid_argument& e) {
    throw InvariantViolation(std::string("period matrix rejected: ") + e.what());
  }
}

/// Images of the Weierstrass points as half periods (tau a + b)/2 with integer
/// a, b (b may exceed 1: the images are exact points, not classes).
template <typename Real>
struct WeierstrassImages {
  std::vector<CVector<Real>> images;  // A(p_1) .. A(p_{2g+2})
  std::vector<Eigen::VectorXi> a;
  std::vector<Eigen::VectorXi> b;
  CVector<Real> r_shift;  // R = A(p_2)

  /// Characteristic of A(p_i) + A(p_j) reduced mod 2 (1-based indices).
  Characteristic pair_characteristic(int i, int j) const {
    const auto& ai = a.at(static_cast<std::size_t>(i - 1));
    const auto& aj = a.at(static_cast<std::size_t>(j - 1));
    const auto& bi = b.at(static_cast<std::size_t>(i - 1));
    const auto& bj = b.at(static_cast<std::size_t>(j - 1));
    const int g = static_cast<int>(ai.size());
    std::uint32_t em = 0, dm = 0;
    for (int k = 0; k < g; ++k) {
      em = (em << 1) | static_cast<std::uint32_t>((ai[k] + aj[k]) & 1);
      dm = (dm << 1) | static_cast<std::uint32_t>((bi[k] + bj[k]) & 1);
    }
    return Characteristic(BinaryVector(g, em), BinaryVector(g, dm));
  }
};

template <typename Real>
WeierstrassImages<Real> weierstrass_images(const PeriodMatrix<Real>& tau) {
  const int g = tau.genus();
  auto ivec = [g](const BinaryVector& v) {
    Eigen::VectorXi out(g);
    for (int i = 0; i < g; ++i) out[i] = v[i];
    return out;
  };
  WeierstrassImages<Real> w;
  auto push = [&](const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
    w.a.push_back(a);
    w.b.push_back(b);
    w.images.push_back(half_period(tau, a, b));
  };
  push(Eigen::VectorXi::Zero(g), Eigen::VectorXi::Zero(g));
  for (int i = 1; i <= g; ++i) {
    const Eigen::VectorXi s_prev = ivec(s_vector(g, i - 1)), s_i = ivec(s_vector(g, i));
    const Eigen::VectorXi e_i = ivec(BinaryVector::unit(g, i));
    push(s_prev, e_i + 2 * s_prev);
    push(s_i, e_i + 2 * s_prev);
  }
  push(ivec(s_vector(g, g)), Eigen::VectorXi::Zero(g));
  w.r_shift = w.images[1];
  return w;
}

template <typename Real>
struct VanishingEntry {
  int point;  // j in A(p_2) + A(p_j)
  Characteristic characteristic;
  Parity parity;
  Real theta_null;     // |theta[c](tau, 0)|
  Real shifted_value;  // |theta(A(p_j) + R)| exp(-log_envelope)
  bool ok;
};

template <typename Real>
struct VanishingReport {
  std::vector<VanishingEntry<Real>> entries;
  bool all_ok = true;
};

/// theta(A(p_j) + R) for every Weierstrass point: odd classes must vanish
/// (below odd_tol), even ones must stay above even_floor.
template <typename Real>
VanishingReport<Real> riemann_vanishing_check(const PeriodMatrix<Real>& tau,
                                              const WeierstrassImages<Real>& w,
                                              TruncationSpec spec = {}, Real odd_tol = Real(1e-8),
                                              Real even_floor = Real(1e-6)) {
  const int g = tau.genus();
  if (static_cast<int>(w.images.size()) != 2 * g + 2)
    throw std::invalid_argument("Weierstrass data does not match the genus");
  VanishingReport<Real> report;
  const CVector<Real> zero = CVector<Real>::Zero(g);
  for (int j = 1; j <= 2 * g + 2; ++j) {
    const Characteristic c = w.pair_characteristic(2, j);
    const Parity par = parity(c);
    const Real null = std::abs(theta_char(tau, zero, c, spec).value);
    const CVector<Real> pt = w.images[static_cast<std::size_t>(j - 1)] + w.r_shift;
    const auto direct = theta(tau, pt, spec);
    const Real shifted = std::abs(direct.value) * std::exp(-Real(direct.truncation.log_envelope));
    const bool ok = par == Parity::odd ? (null < odd_tol && shifted < odd_tol)
                                       : (null > even_floor && shifted > even_floor);
    report.entries.push_back({j, c, par, null, shifted, ok});
    report.all_ok = report.all_ok && ok;
  }
  return report;
}

}  // namespace hyperjac

#endif  // HYPERJAC_PERIODS_HPP

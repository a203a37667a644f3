#ifndef HYPERJAC_VERIFIER_HPP
#define HYPERJAC_VERIFIER_HPP

// Numerical checks of the addition-formula chain, the cubic identities and
// the multisecant rank conditions. Everything is double precision.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hyperjac/identities.hpp"
#include "hyperjac/periods.hpp"
#include "hyperjac/theta.hpp"

namespace hyperjac {

using Complex = std::complex<double>;
using CMat = CMatrix<double>;
using CVec = CVector<double>;
using Tau = PeriodMatrix<double>;

/// A theta value in a denominator came out (envelope-normalized) below the
/// configured floor; the caller should draw a new sample.
class DegenerateSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerifierConfig {
  TruncationSpec truncation{};
  double denominator_floor = 1e-10;
  double rank_threshold = 1e-8;
  double rank_ambiguity = 1e-4;  // ratios in [rank_threshold, rank_ambiguity] are undecided
  int threads = 1;
};

/// tau = S + i (Q^T Q + g I), S symmetric with entries in [-0.4,0.4], Q in [-0.3,0.3].
CMat random_siegel(int genus, std::mt19937_64& rng);

/// Point with real part in [0,1)^g and Im z = Im(tau) u, u in [-1/2,1/2]^g.
CVec random_point(const Tau& tau, std::mt19937_64& rng, double spread = 1.0);

struct HalfPeriodLabel {
  Eigen::VectorXi a, b;  // point (tau a + b)/2
};

/// P = A_0 = 0, A_1..A_g, Q = A_{g+1} and the shift R.
struct AdditionPoints {
  std::vector<CVec> A;
  CVec R;
  // Integer labels of A_0..A_{g+1} and R when all of them are half periods.
  std::optional<std::vector<HalfPeriodLabel>> labels;
  std::optional<HalfPeriodLabel> r_label;

  int genus() const { return static_cast<int>(A.size()) - 2; }
  const CVec& Q() const { return A.back(); }
};

/// Q = A(p_2), A_k = A(p_{2k+2}), R = A(p_2) from the Weierstrass images.
AdditionPoints hyperelliptic_addition_points(const Tau& tau);

struct Fact1Sample {
  Complex value;  // left minus right of the cleared form
  double scale;   // sum of term magnitudes
  double residual;
};

Fact1Sample eval_fact1(const Tau& tau, const AdditionPoints& pts, const CVec& x, const CVec& y,
                       const VerifierConfig& cfg = {});

struct MessSample {
  std::vector<Complex> b;          // bracketed coefficient per sigma
  std::vector<double> scale;       // term magnitude sum per sigma
  std::vector<double> residual;    // |b| / scale
  double max_residual = 0;
  Complex recombined;              // sum_sigma b_sigma Theta[sigma](w)
  Fact1Sample fact1;               // at x = z + w, y = z - w
  double chain_residual = 0;       // |recombined - fact1.value| / fact1.scale
};

MessSample eval_mess(const Tau& tau, const AdditionPoints& pts, const CVec& z, const CVec& w,
                     const VerifierConfig& cfg = {});

struct LastaddSample {
  std::vector<Complex> b;
  std::vector<double> scale;
  std::vector<double> residual;
  double max_residual = 0;
  std::vector<Complex> mess_b;  // the same coefficients from the first-order form
  double chain_residual = 0;    // max_sigma |b - mess_b| / scale
};

LastaddSample eval_lastadd(const Tau& tau, const AdditionPoints& pts, const CVec& z,
                           const VerifierConfig& cfg = {});

struct RatioEntry {
  int k;
  Complex computed;   // theta(R) / theta(2 A_k + R)
  Complex corrected;  // e[(a_k, tau a_k) + (a, tau a_k)] (-1)^{(a_k, b)}
  Complex printed;    // e[(a_k, tau a_k) + (a, tau a_k)]
  double residual;    // |computed - corrected| / |corrected|
};

/// Needs half-period labels on pts.
std::vector<RatioEntry> coefficient_ratio_check(const Tau& tau, const AdditionPoints& pts,
                                                const VerifierConfig& cfg = {});

struct CubicEvaluation {
  Complex value;
  double scale;
  double residual;  // |value| / scale, 0 for the empty identity
};

CubicEvaluation eval_cubic(const CVec& kummer_coords, const CubicIdentity& id);
CubicEvaluation eval_cubic(const Tau& tau, const CubicIdentity& id, const CVec& z, const VerifierConfig& cfg = {});

struct FactorCheck {
  Complex cubic;    // content times the canonical cubic
  Complex product;  // (-1)^{(111,sigma)} Theta[101+sigma](z) theta[101;111](2z) theta[101;111](0)
  double residual;
};

FactorCheck factor_check_genus3(const Tau& tau, const BinaryVector& sigma, const CVec& z,
                                const VerifierConfig& cfg = {});

struct NondegeneracyReport {
  bool vacuous = false;        // no monomials at all
  bool nondegenerate = false;
  double max_coefficient = 0;  // max over sigma, k, samples of |c_k(z)| / max|Theta|^2
  int monomials_without_kummer_factor = 0;
};

/// Groups each cubic's monomials by the factor of the form sigma + s_k
/// (lowest k wins) and measures the coefficient functions on z_samples.
NondegeneracyReport nondegeneracy_check(const Tau& tau, const std::vector<CubicIdentity>& family,
                                        const std::vector<CVec>& z_samples, const VerifierConfig& cfg = {},
                                        double threshold = 1e-8);

struct SecantReport {
  int rows = 0;
  int cols = 0;
  std::vector<double> singular_values;  // descending, of the row-normalized matrix
  std::optional<int> decided_rank;      // empty when ambiguous
  double gap_ratio = 0;                 // s_{r+1}/s_1, 0 when r = min(rows, cols)
  bool ambiguous = false;
};

SecantReport rank_report(const CMat& rows, const VerifierConfig& cfg = {});

/// Rows K(point_i + z).
SecantReport secant_rank(const Tau& tau, const std::vector<CVec>& points, const CVec& z,
                         const VerifierConfig& cfg = {});

/// A_i + (x - A_0 - A_1 - A_2)/2 for i = 0, 1, 2.
std::vector<CVec> fay_trisecant_points(const CVec& x, const std::array<CVec, 3>& A);

struct GeneralPositionEntry {
  int k, l;
  SecantReport report;
  bool satisfied;  // rank of K(A_i + y), y = -(A_k + A_l)/2, is exactly g + 1
};

std::vector<GeneralPositionEntry> general_position_pairs(const Tau& tau, const std::vector<CVec>& A,
                                                         const VerifierConfig& cfg = {});

struct FinalRemarkReport {
  double max_at_zero = 0;
  double max_at_order_two = 0;
  double max_at_random = 0;
  int order_two_points = 0;
  int random_points = 0;
  // if max_at_zero < tol then max_at_order_two < 10 tol (vacuously true otherwise)
  bool implication_holds = true;
};

FinalRemarkReport final_remark_experiment(const Tau& tau, const std::vector<CubicIdentity>& family,
                                          std::mt19937_64& rng, int random_points = 10,
                                          double tol = 1e-6, const VerifierConfig& cfg = {});

/// Worker count: requested, capped by THETA_SECANT_THREADS when set, at least 1.
int resolve_threads(int requested);

/// out[i] = f(i) computed on up to `threads` workers; results are placed by
/// index so the output does not depend on scheduling. The first exception
/// (by index) is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t n, int threads, const std::function<T(std::size_t)>& f) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t start, std::size_t stride) {
    for (std::size_t i = start; i < n; i += stride) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n));
  if (t == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < t; ++i) pool.emplace_back(work, i, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace hyperjac

#endif  // HYPERJAC_VERIFIER_HPP

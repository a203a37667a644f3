#include "hyperjac/verifier.hpp"

#include <algorithm>
#include <cstdlib>
#include <numbers>

namespace hyperjac {

namespace {

Complex th(const Tau& tau, const CVec& z, const VerifierConfig& cfg) { return theta(tau, z, cfg.truncation).value; }

// |theta(z)| relative to its growth envelope, so that the floor test does not
// depend on where z sits in the period parallelogram.
double normalized_abs(const Tau& tau, const CVec& z, const VerifierConfig& cfg) {
  const auto ev = theta(tau, z, cfg.truncation);
  return std::abs(ev.value) * std::exp(-ev.truncation.log_envelope);
}

void require_nonzero(const Tau& tau, const CVec& z, const VerifierConfig& cfg, const char* what) {
  const double v = normalized_abs(tau, z, cfg);
  if (!(v >= cfg.denominator_floor))
    throw DegenerateSample(std::string("denominator ") + what + " is " + std::to_string(v) + ", resample");
}

CVec K(const Tau& tau, const CVec& z, const VerifierConfig& cfg) { return kummer(tau, z, cfg.truncation).coords; }

Complex bilinear(const CVec& a, const CVec& b) { return (a.transpose() * b)(0, 0); }

void check_points(const Tau& tau, const AdditionPoints& pts) {
  const int g = tau.genus();
  if (pts.genus() != g) throw std::invalid_argument("addition points do not match the genus of tau");
  for (const auto& a : pts.A)
    if (a.size() != g) throw std::invalid_argument("addition point has wrong length");
  if (pts.R.size() != g) throw std::invalid_argument("R has wrong length");
}

// theta(R) / theta(2 A_k + R), k = 1..g at index k-1.
std::vector<Complex> ratios(const Tau& tau, const AdditionPoints& pts, const VerifierConfig& cfg) {
  const int g = pts.genus();
  const Complex tr = th(tau, pts.R, cfg);
  std::vector<Complex> out;
  for (int k = 1; k <= g; ++k) {
    const CVec p = 2.0 * pts.A[static_cast<std::size_t>(k)] + pts.R;
    require_nonzero(tau, p, cfg, "theta(2A_k+R)");
    out.push_back(tr / th(tau, p, cfg));
  }
  return out;
}

struct Coefficients {
  std::vector<Complex> b;
  std::vector<double> scale;
};

// The bracketed coefficients of the first-order form, as functions of z.
Coefficients mess_coefficients(const Tau& tau, const AdditionPoints& pts, const CVec& z, const VerifierConfig& cfg) {
  const int g = pts.genus();
  const CVec& Q = pts.Q();
  const CVec& R = pts.R;
  const auto rat = ratios(tau, pts, cfg);
  const Complex c_first = th(tau, CVec(Q + 2.0 * z + R), cfg) * th(tau, CVec(Q + R), cfg);
  const Complex c_second = th(tau, CVec(2.0 * z + R), cfg) * th(tau, R, cfg);
  const CVec k_first = K(tau, CVec(z + R), cfg);
  const CVec k_second = K(tau, CVec(Q + z + R), cfg);
  std::vector<Complex> ck;
  std::vector<CVec> kk;
  for (int k = 1; k <= g; ++k) {
    const CVec& Ak = pts.A[static_cast<std::size_t>(k)];
    ck.push_back(rat[static_cast<std::size_t>(k - 1)] * th(tau, CVec(Q + Ak + R), cfg) *
                 th(tau, CVec(Q - Ak + 2.0 * z + R), cfg));
    kk.push_back(K(tau, CVec(Ak + z + R), cfg));
  }
  const Eigen::Index n = k_first.size();
  Coefficients out{std::vector<Complex>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
  for (Eigen::Index s = 0; s < n; ++s) {
    const Complex t1 = c_first * k_first[s], t2 = -c_second * k_second[s];
    Complex sum = t1 + t2;
    double scale = std::abs(t1) + std::abs(t2);
    for (std::size_t k = 0; k < ck.size(); ++k) {
      const Complex t = ck[k] * kk[k][s];
      sum += t;
      scale += std::abs(t);
    }
    out.b[static_cast<std::size_t>(s)] = sum;
    out.scale[static_cast<std::size_t>(s)] = scale;
  }
  return out;
}

double safe_ratio(double num, double den) { return den > 0 ? num / den : (num > 0 ? INFINITY : 0.0); }

}  // namespace

CMat random_siegel(int genus, std::mt19937_64& rng) {
  if (genus < 1) throw std::invalid_argument("genus must be positive");
  std::uniform_real_distribution<double> us(-0.4, 0.4), uq(-0.3, 0.3);
  Eigen::MatrixXd S(genus, genus), Qm(genus, genus);
  for (int i = 0; i < genus; ++i)
    for (int j = 0; j <= i; ++j) S(i, j) = S(j, i) = us(rng);
  for (int i = 0; i < genus; ++i)
    for (int j = 0; j < genus; ++j) Qm(i, j) = uq(rng);
  const Eigen::MatrixXd Y = Qm.transpose() * Qm + genus * Eigen::MatrixXd::Identity(genus, genus);
  return S.cast<Complex>() + Complex(0, 1) * Y.cast<Complex>();
}

CVec random_point(const Tau& tau, std::mt19937_64& rng, double spread) {
  const int g = tau.genus();
  std::uniform_real_distribution<double> ux(0.0, 1.0), uu(-0.5, 0.5);
  Eigen::VectorXd x(g), u(g);
  for (int i = 0; i < g; ++i) x[i] = ux(rng);
  for (int i = 0; i < g; ++i) u[i] = uu(rng);
  const Eigen::VectorXd y = spread * (tau.imag() * u);
  return x.cast<Complex>() + Complex(0, 1) * y.cast<Complex>();
}

AdditionPoints hyperelliptic_addition_points(const Tau& tau) {
  const int g = tau.genus();
  const auto w = weierstrass_images(tau);
  AdditionPoints pts;
  std::vector<HalfPeriodLabel> labels;
  auto take = [&](int i) {  // 1-based Weierstrass index
    const auto idx = static_cast<std::size_t>(i - 1);
    pts.A.push_back(w.images[idx]);
    labels.push_back({w.a[idx], w.b[idx]});
  };
  take(1);
  for (int k = 1; k <= g; ++k) take(2 * k + 2);
  take(2);
  pts.R = w.r_shift;
  pts.labels = labels;
  pts.r_label = HalfPeriodLabel{w.a[1], w.b[1]};
  return pts;
}

Fact1Sample eval_fact1(const Tau& tau, const AdditionPoints& pts, const CVec& x, const CVec& y,
                       const VerifierConfig& cfg) {
  check_points(tau, pts);
  const int g = pts.genus();
  const CVec& Q = pts.Q();
  const CVec& R = pts.R;
  require_nonzero(tau, CVec(Q + R), cfg, "theta(Q+R)");
  require_nonzero(tau, CVec(x + y + R), cfg, "theta(x+y+R)");
  require_nonzero(tau, CVec(x + R), cfg, "theta(x+R)");
  require_nonzero(tau, CVec(y + R), cfg, "theta(y+R)");
  const auto rat = ratios(tau, pts, cfg);

  const Complex L = th(tau, CVec(Q + x + y + R), cfg) * th(tau, CVec(Q + R), cfg) * th(tau, CVec(x + R), cfg) *
                    th(tau, CVec(y + R), cfg);
  const Complex T = th(tau, CVec(x + y + R), cfg) * th(tau, R, cfg) * th(tau, CVec(Q + x + R), cfg) *
                    th(tau, CVec(Q + y + R), cfg);
  Complex value = L - T;
  double scale = std::abs(L) + std::abs(T);
  for (int k = 1; k <= g; ++k) {
    const CVec& Ak = pts.A[static_cast<std::size_t>(k)];
    const Complex s = rat[static_cast<std::size_t>(k - 1)] * th(tau, CVec(Q + Ak + R), cfg) *
                      th(tau, CVec(Q - Ak + x + y + R), cfg) * th(tau, CVec(Ak + x + R), cfg) *
                      th(tau, CVec(Ak + y + R), cfg);
    value += s;
    scale += std::abs(s);
  }
  return {value, scale, safe_ratio(std::abs(value), scale)};
}

MessSample eval_mess(const Tau& tau, const AdditionPoints& pts, const CVec& z, const CVec& w,
                     const VerifierConfig& cfg) {
  check_points(tau, pts);
  MessSample out;
  out.fact1 = eval_fact1(tau, pts, CVec(z + w), CVec(z - w), cfg);
  auto c = mess_coefficients(tau, pts, z, cfg);
  const CVec kw = K(tau, w, cfg);
  out.recombined = 0;
  for (std::size_t s = 0; s < c.b.size(); ++s) {
    out.recombined += c.b[s] * kw[static_cast<Eigen::Index>(s)];
    out.residual.push_back(safe_ratio(std::abs(c.b[s]), c.scale[s]));
    out.max_residual = std::max(out.max_residual, out.residual.back());
  }
  out.b = std::move(c.b);
  out.scale = std::move(c.scale);
  out.chain_residual = safe_ratio(std::abs(out.recombined - out.fact1.value), out.fact1.scale);
  return out;
}

LastaddSample eval_lastadd(const Tau& tau, const AdditionPoints& pts, const CVec& z, const VerifierConfig& cfg) {
  check_points(tau, pts);
  const int g = pts.genus();
  const CVec& Q = pts.Q();
  const CVec& R = pts.R;
  const auto rat = ratios(tau, pts, cfg);
  const CVec kz = K(tau, z, cfg);
  const CVec kqzr = K(tau, CVec(Q + z + R), cfg);
  const CVec kzr = K(tau, CVec(z + R), cfg);
  const Complex first = bilinear(kqzr, kz);
  const Complex second = bilinear(kzr, kz);
  std::vector<Complex> ck;
  std::vector<CVec> kk;
  for (int k = 1; k <= g; ++k) {
    const CVec& Ak = pts.A[static_cast<std::size_t>(k)];
    ck.push_back(rat[static_cast<std::size_t>(k - 1)] * bilinear(kqzr, K(tau, CVec(z - Ak), cfg)));
    kk.push_back(K(tau, CVec(Ak + z + R), cfg));
  }
  const auto mess = mess_coefficients(tau, pts, z, cfg);
  LastaddSample out;
  for (Eigen::Index s = 0; s < kz.size(); ++s) {
    const Complex t1 = first * kzr[s], t2 = -second * kqzr[s];
    Complex sum = t1 + t2;
    double scale = std::abs(t1) + std::abs(t2);
    for (std::size_t k = 0; k < ck.size(); ++k) {
      const Complex t = ck[k] * kk[k][s];
      sum += t;
      scale += std::abs(t);
    }
    const auto si = static_cast<std::size_t>(s);
    out.b.push_back(sum);
    out.scale.push_back(scale);
    out.residual.push_back(safe_ratio(std::abs(sum), scale));
    out.max_residual = std::max(out.max_residual, out.residual.back());
    out.mess_b.push_back(mess.b[si]);
    out.chain_residual =
        std::max(out.chain_residual, safe_ratio(std::abs(sum - mess.b[si]), std::max(scale, mess.scale[si])));
  }
  return out;
}

std::vector<RatioEntry> coefficient_ratio_check(const Tau& tau, const AdditionPoints& pts, const VerifierConfig& cfg) {
  check_points(tau, pts);
  if (!pts.labels || !pts.r_label) throw std::invalid_argument("coefficient ratio check needs half-period labels");
  const int g = pts.genus();
  const auto rat = ratios(tau, pts, cfg);
  const CMat& T = tau.matrix();
  const Eigen::VectorXi& alpha = pts.r_label->a;
  const Eigen::VectorXi& beta = pts.r_label->b;
  std::vector<RatioEntry> out;
  for (int k = 1; k <= g; ++k) {
    const Eigen::VectorXi& ak = (*pts.labels)[static_cast<std::size_t>(k)].a;
    const CVec akc = ak.cast<Complex>();
    const Complex expo = bilinear(akc, T * akc) + bilinear(alpha.cast<Complex>(), T * akc);
    const Complex printed = detail::expi_pi(expo);
    const Complex corrected = (ak.dot(beta) % 2 != 0 ? -1.0 : 1.0) * printed;
    const Complex computed = rat[static_cast<std::size_t>(k - 1)];
    out.push_back({k, computed, corrected, printed, std::abs(computed - corrected) / std::abs(corrected)});
  }
  return out;
}

CubicEvaluation eval_cubic(const CVec& kc, const CubicIdentity& id) {
  if (kc.size() != (Eigen::Index{1} << id.genus)) throw std::invalid_argument("Kummer vector length does not match the cubic");
  Complex value = 0;
  double scale = 0;
  for (const auto& m : id.monomials) {
    const Complex t = static_cast<double>(m.mult) * kc[m.factors[0].mask()] * kc[m.factors[1].mask()] *
                      kc[m.factors[2].mask()];
    value += static_cast<double>(m.sign) * t;
    scale += std::abs(t);
  }
  return {value, scale, safe_ratio(std::abs(value), scale)};
}

CubicEvaluation eval_cubic(const Tau& tau, const CubicIdentity& id, const CVec& z, const VerifierConfig& cfg) {
  if (id.genus != tau.genus()) throw std::invalid_argument("cubic genus does not match tau");
  return eval_cubic(K(tau, z, cfg), id);
}

FactorCheck factor_check_genus3(const Tau& tau, const BinaryVector& sigma, const CVec& z, const VerifierConfig& cfg) {
  if (tau.genus() != 3 || sigma.size() != 3) throw std::invalid_argument("factor check is for genus 3");
  static const auto family = gen_cubics(3);
  const auto& id = family.at(sigma);
  const CVec kc = K(tau, z, cfg);
  const auto ev = eval_cubic(kc, id);
  const auto c = Characteristic::parse("[101;111]");
  const auto v101 = BinaryVector::parse("101");
  const double sign = dot_mod2(BinaryVector::parse("111"), sigma) ? -1.0 : 1.0;
  const Complex product = sign * kc[(v101 + sigma).mask()] * theta_char(tau, CVec(2.0 * z), c, cfg.truncation).value *
                          theta_char(tau, CVec(CVec::Zero(3)), c, cfg.truncation).value;
  const Complex cubic = static_cast<double>(id.content) * ev.value;
  const double scale = std::abs(static_cast<double>(id.content)) * ev.scale + std::abs(product);
  return {cubic, product, safe_ratio(std::abs(cubic - product), scale)};
}

NondegeneracyReport nondegeneracy_check(const Tau& tau, const std::vector<CubicIdentity>& family,
                                        const std::vector<CVec>& z_samples, const VerifierConfig& cfg,
                                        double threshold) {
  NondegeneracyReport rep;
  std::size_t total = 0;
  for (const auto& id : family) {
    if (id.genus != tau.genus()) throw std::invalid_argument("cubic genus does not match tau");
    total += id.monomials.size();
  }
  if (total == 0 || z_samples.empty()) {
    rep.vacuous = true;
    return rep;
  }
  const int g = tau.genus();
  for (const auto& z : z_samples) {
    const CVec kc = K(tau, z, cfg);
    const double norm2 = std::pow(kc.cwiseAbs().maxCoeff(), 2);
    for (const auto& id : family) {
      std::vector<Complex> coeff(static_cast<std::size_t>(g + 1), 0.0);
      for (const auto& m : id.monomials) {
        int hit = -1, pos = -1;
        for (int k = 0; k <= g && hit < 0; ++k) {
          const auto target = id.sigma + s_vector(g, k);
          for (int f = 0; f < 3; ++f)
            if (m.factors[static_cast<std::size_t>(f)] == target) {
              hit = k;
              pos = f;
              break;
            }
        }
        if (hit < 0) {
          ++rep.monomials_without_kummer_factor;
          continue;
        }
        Complex rest = static_cast<double>(m.sign * m.mult);
        for (int f = 0; f < 3; ++f)
          if (f != pos) rest *= kc[m.factors[static_cast<std::size_t>(f)].mask()];
        coeff[static_cast<std::size_t>(hit)] += rest;
      }
      for (const auto& c : coeff) rep.max_coefficient = std::max(rep.max_coefficient, std::abs(c) / norm2);
    }
  }
  // each z sample was counted once per identity; normalize the counter
  rep.monomials_without_kummer_factor /= static_cast<int>(z_samples.size());
  rep.nondegenerate = rep.max_coefficient > threshold;
  return rep;
}

SecantReport rank_report(const CMat& rows, const VerifierConfig& cfg) {
  if (rows.rows() < 2) throw std::invalid_argument("rank decision needs at least two rows");
  CMat m = rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double mx = m.row(i).cwiseAbs().maxCoeff();
    if (mx > 0) m.row(i) /= mx;
  }
  Eigen::JacobiSVD<CMat> svd(m);
  SecantReport rep;
  rep.rows = static_cast<int>(m.rows());
  rep.cols = static_cast<int>(m.cols());
  const auto& sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i) rep.singular_values.push_back(sv[i]);
  const double s1 = sv.size() > 0 ? sv[0] : 0.0;
  int r = 0;
  for (double s : rep.singular_values) {
    const double ratio = s1 > 0 ? s / s1 : 0.0;
    if (ratio >= cfg.rank_threshold) ++r;
    if (ratio >= cfg.rank_threshold && ratio <= cfg.rank_ambiguity) rep.ambiguous = true;
  }
  rep.gap_ratio = r < static_cast<int>(rep.singular_values.size()) && s1 > 0
                      ? rep.singular_values[static_cast<std::size_t>(r)] / s1
                      : 0.0;
  if (!rep.ambiguous) rep.decided_rank = r;
  return rep;
}

SecantReport secant_rank(const Tau& tau, const std::vector<CVec>& points, const CVec& z, const VerifierConfig& cfg) {
  if (points.size() < 2) throw std::invalid_argument("secant rank needs at least two points");
  const Eigen::Index n = Eigen::Index{1} << tau.genus();
  CMat rows(static_cast<Eigen::Index>(points.size()), n);
  for (std::size_t i = 0; i < points.size(); ++i)
    rows.row(static_cast<Eigen::Index>(i)) = K(tau, CVec(points[i] + z), cfg).transpose();
  return rank_report(rows, cfg);
}

std::vector<CVec> fay_trisecant_points(const CVec& x, const std::array<CVec, 3>& A) {
  const CVec shift = (x - A[0] - A[1] - A[2]) / 2.0;
  return {CVec(A[0] + shift), CVec(A[1] + shift), CVec(A[2] + shift)};
}

std::vector<GeneralPositionEntry> general_position_pairs(const Tau& tau, const std::vector<CVec>& A,
                                                         const VerifierConfig& cfg) {
  const int g = tau.genus();
  std::vector<GeneralPositionEntry> out;
  for (std::size_t k = 0; k < A.size(); ++k)
    for (std::size_t l = k + 1; l < A.size(); ++l) {
      const CVec y = -(A[k] + A[l]) / 2.0;
      auto rep = secant_rank(tau, A, y, cfg);
      const bool ok = rep.decided_rank && *rep.decided_rank == g + 1;
      out.push_back({static_cast<int>(k), static_cast<int>(l), std::move(rep), ok});
    }
  return out;
}

FinalRemarkReport final_remark_experiment(const Tau& tau, const std::vector<CubicIdentity>& family,
                                          std::mt19937_64& rng, int random_points, double tol,
                                          const VerifierConfig& cfg) {
  const int g = tau.genus();
  if (g < 3 || g > 4) throw std::invalid_argument("final remark experiment is for genus 3 or 4");
  auto worst = [&](const CVec& z) {
    const CVec kc = K(tau, z, cfg);
    double m = 0;
    for (const auto& id : family) m = std::max(m, eval_cubic(kc, id).residual);
    return m;
  };
  FinalRemarkReport rep;
  rep.max_at_zero = worst(CVec(CVec::Zero(g)));
  for (const auto& a : enumerate(g))
    for (const auto& b : enumerate(g)) {
      rep.max_at_order_two = std::max(rep.max_at_order_two, worst(half_period(tau, Characteristic(a, b))));
      ++rep.order_two_points;
    }
  for (int i = 0; i < random_points; ++i) {
    rep.max_at_random = std::max(rep.max_at_random, worst(random_point(tau, rng, 0.5)));
    ++rep.random_points;
  }
  rep.implication_holds = !(rep.max_at_zero < tol) || rep.max_at_order_two < 10 * tol;
  return rep;
}

int resolve_threads(int requested) {
  int n = std::max(requested, 1);
  if (const char* cap = std::getenv("THETA_SECANT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && v >= 1) n = std::min<long>(n, v);
  }
  return n;
}

}  // namespace hyperjac

#include "hyperjac/report_json.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hyperjac {

void RunConfig::validate() const {
  if (!(tolerance > 0)) throw std::invalid_argument("tolerance must be positive");
  if (!(truncation_eps > 0)) throw std::invalid_argument("truncation eps must be positive");
  if (!(truncation_eps < tolerance)) throw std::invalid_argument("truncation eps must be below the tolerance");
  if (quad_nodes < 1) throw std::invalid_argument("quadrature node count must be positive");
}

void IdentityReport::add(ReportSample s) {
  const double r = std::isnan(s.residual) ? INFINITY : s.residual;
  max_residual = samples.empty() ? r : std::max(max_residual, r);
  samples.push_back(std::move(s));
}

namespace json {

Json complex(const Complex& v) { return Json::array({v.real(), v.imag()}); }

Json vector(const CVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex(v[i]));
  return out;
}

Json matrix(const CMat& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json int_vector(const Eigen::VectorXi& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Complex complex_from(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("expected a number or an [re, im] pair, got " + j.dump());
}

CVec vector_from(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a non-empty array");
  CVec out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) out[static_cast<Eigen::Index>(i)] = complex_from(j[i]);
  return out;
}

CMat matrix_from(const Json& j) {
  const Json& rows = j.is_object() && j.contains("tau") ? j.at("tau") : j;
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMat out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw std::invalid_argument("matrix row " + std::to_string(i) + " does not have " + std::to_string(n) + " entries");
    for (Eigen::Index k = 0; k < n; ++k) out(i, k) = complex_from(row[static_cast<std::size_t>(k)]);
  }
  return out;
}

std::string digest(const CMat& m) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](double d) {
    auto bits = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      mix(m(i, j).real());
      mix(m(i, j).imag());
    }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json to_json(const RunConfig& c) {
  return Json{{"genus", c.genus},
              {"tolerance", c.tolerance},
              {"truncation_eps", c.truncation_eps},
              {"quad_nodes", c.quad_nodes},
              {"seed", c.seed},
              {"output_path", c.output_path}};
}

Json to_json(const TruncationSpec& t) {
  return Json{{"eps_abs", t.eps_abs}, {"radius", t.radius}, {"term_count", t.term_count}, {"tail_bound", t.tail_bound}};
}

Json to_json(const CubicIdentity& id) {
  Json monos = Json::array();
  for (const auto& m : id.monomials) {
    Json f = Json::array();
    for (const auto& v : m.factors) f.push_back(v.str());
    monos.push_back(Json{{"sign", m.sign}, {"mult", m.mult}, {"factors", std::move(f)}});
  }
  return Json{{"genus", id.genus}, {"sigma", id.sigma.str()}, {"content", id.content}, {"monomials", std::move(monos)}};
}

CubicIdentity cubic_from(const Json& j) {
  CubicIdentity id;
  id.genus = j.at("genus").get<int>();
  id.sigma = BinaryVector::parse(j.at("sigma").get<std::string>());
  if (id.sigma.size() != id.genus) throw std::invalid_argument("sigma length differs from genus");
  id.content = j.at("content").get<long>();
  for (const auto& m : j.at("monomials")) {
    Monomial mono;
    mono.sign = m.at("sign").get<int>();
    mono.mult = m.at("mult").get<long>();
    const auto& f = m.at("factors");
    if (f.size() != 3) throw std::invalid_argument("a monomial needs three factors");
    for (std::size_t i = 0; i < 3; ++i) {
      mono.factors[i] = BinaryVector::parse(f[i].get<std::string>());
      if (mono.factors[i].size() != id.genus) throw std::invalid_argument("factor length differs from genus");
    }
    id.monomials.push_back(mono);
  }
  return id;
}

Json to_json(const PeriodData<double>& p) {
  return Json{{"a_periods", matrix(p.a_periods)},
              {"b_periods", matrix(p.b_periods)},
              {"tau", matrix(p.tau.matrix())},
              {"quad_nodes", p.quad_nodes},
              {"convergence_delta", p.convergence_delta}};
}

Json to_json(const WeierstrassImages<double>& w) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < w.images.size(); ++i)
    pts.push_back(Json{{"point", i + 1}, {"a", int_vector(w.a[i])}, {"b", int_vector(w.b[i])}, {"image", vector(w.images[i])}});
  return pts;
}

Json to_json(const VanishingReport<double>& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries)
    entries.push_back(Json{{"point", e.point},
                           {"characteristic", e.characteristic.str()},
                           {"parity", to_string(e.parity)},
                           {"theta_null", e.theta_null},
                           {"shifted_value", e.shifted_value},
                           {"ok", e.ok}});
  return Json{{"entries", std::move(entries)}, {"all_ok", r.all_ok}};
}

Json to_json(const SecantReport& r) {
  Json out{{"matrix_shape", Json::array({r.rows, r.cols})}, {"singular_values", r.singular_values}};
  out["decided_rank"] = r.decided_rank ? Json(*r.decided_rank) : Json(nullptr);
  out["gap_ratio"] = r.gap_ratio;
  out["ambiguous"] = r.ambiguous;
  return out;
}

Json to_json(const IdentityReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) samples.push_back(Json{{"inputs", s.inputs}, {"residual", s.residual}});
  return Json{{"identity_id", r.identity_id},
              {"tolerance", r.tolerance},
              {"samples", std::move(samples)},
              {"max_residual", r.max_residual},
              {"verdict", r.passed() ? "pass" : "fail"},
              {"expected", r.expect_pass ? "pass" : "fail"}};
}

Json to_json(const NondegeneracyReport& r) {
  return Json{{"vacuous", r.vacuous},
              {"nondegenerate", r.nondegenerate},
              {"max_coefficient", r.max_coefficient},
              {"monomials_without_kummer_factor", r.monomials_without_kummer_factor}};
}

Json to_json(const FinalRemarkReport& r) {
  return Json{{"max_at_zero", r.max_at_zero},
              {"max_at_order_two", r.max_at_order_two},
              {"max_at_random", r.max_at_random},
              {"order_two_points", r.order_two_points},
              {"random_points", r.random_points},
              {"implication_holds", r.implication_holds}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace json
}  // namespace hyperjac

#ifndef HYPERJAC_REPORT_JSON_HPP
#define HYPERJAC_REPORT_JSON_HPP

// JSON encoding of library results. Complex numbers are [re, im] pairs and
// doubles are written in shortest round-trip form, so equal inputs give
// byte-equal documents.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hyperjac/identities.hpp"
#include "hyperjac/periods.hpp"
#include "hyperjac/verifier.hpp"

namespace hyperjac {

using Json = nlohmann::ordered_json;

struct RunConfig {
  int genus = 0;
  double tolerance = 1e-6;
  double truncation_eps = 1e-14;
  int quad_nodes = 256;
  std::uint64_t seed = 0;
  std::string output_path;  // empty = stdout

  /// Throws std::invalid_argument on tolerance <= 0 or truncation_eps >= tolerance.
  void validate() const;
};

struct ReportSample {
  Json inputs;
  double residual = 0;
};

struct IdentityReport {
  std::string identity_id;
  double tolerance = 0;
  std::vector<ReportSample> samples;
  double max_residual = 0;
  bool expect_pass = true;

  bool passed() const { return max_residual < tolerance; }
  bool matches_expectation() const { return passed() == expect_pass; }
  /// Appends and keeps max_residual current. NaN residuals count as failures.
  void add(ReportSample s);
};

namespace json {

Json complex(const Complex& v);
Json vector(const CVec& v);
Json matrix(const CMat& m);
Json int_vector(const Eigen::VectorXi& v);

/// Accepts numbers or [re, im] pairs.
Complex complex_from(const Json& j);
CVec vector_from(const Json& j);
CMat matrix_from(const Json& j);

/// 16 hex digits of FNV-1a over the entries' bit patterns.
std::string digest(const CMat& m);

Json to_json(const RunConfig& c);
Json to_json(const TruncationSpec& t);
Json to_json(const CubicIdentity& id);
CubicIdentity cubic_from(const Json& j);
Json to_json(const PeriodData<double>& p);
Json to_json(const WeierstrassImages<double>& w);
Json to_json(const VanishingReport<double>& r);
Json to_json(const SecantReport& r);
Json to_json(const IdentityReport& r);
Json to_json(const NondegeneracyReport& r);
Json to_json(const FinalRemarkReport& r);

std::string dump(const Json& j);

}  // namespace json
}  // namespace hyperjac

#endif  // HYPERJAC_REPORT_JSON_HPP

#include "hyperjac/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"

#include "hyperjac/report_json.hpp"

namespace hyperjac {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double parse_real(const std::string& tok) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    throw UsageError("not a finite real number: '" + tok + "'");
  return v;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split_list(s)) out.push_back(parse_real(t));
  return out;
}

// "0.1,0.2" or a JSON array whose entries may be [re, im] pairs.
CVec parse_point(const std::string& s, int genus) {
  CVec z;
  if (!s.empty() && s.front() == '[') {
    try {
      z = json::vector_from(Json::parse(s));
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad --z: ") + e.what());
    }
  } else {
    const auto v = parse_reals(s);
    z.resize(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) z[static_cast<Eigen::Index>(i)] = v[i];
  }
  if (z.size() != genus)
    throw UsageError("--z has " + std::to_string(z.size()) + " entries but the genus is " + std::to_string(genus));
  return z;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

Tau read_tau(const std::string& path) {
  const Json j = read_json_file(path);
  try {
    return Tau(json::matrix_from(j));
  } catch (const std::invalid_argument& e) {
    throw UsageError("malformed period matrix in '" + path + "': " + e.what());
  }
}

void emit(const Json& doc, const RunConfig& cfg, std::ostream& out) {
  const std::string text = json::dump(doc);
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot write '" + cfg.output_path + "'");
  f << text;
  if (!f) throw std::runtime_error("writing '" + cfg.output_path + "' failed");
}

VerifierConfig verifier_config(const RunConfig& cfg) {
  VerifierConfig vc;
  vc.truncation.eps_abs = cfg.truncation_eps;
  return vc;
}

// Independent stream per (suite, sample) so results do not depend on the
// worker that ran them.
std::mt19937_64 sample_rng(std::uint64_t seed, int suite, std::size_t index) {
  std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(ss);
}

void add_common_options(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--tolerance", cfg.tolerance, "verdict tolerance on scale-free residuals")->capture_default_str();
  cmd.add_option("--eps", cfg.truncation_eps, "theta truncation tail bound")->capture_default_str();
  cmd.add_option("--output,-o", cfg.output_path, "write JSON here instead of stdout");
}

// ---------------------------------------------------------------- eval-theta

struct EvalThetaArgs {
  std::string tau_path;
  std::string z;
  std::string characteristic;
};

int cmd_eval_theta(const EvalThetaArgs& a, RunConfig cfg, std::ostream& out) {
  const Tau tau = read_tau(a.tau_path);
  const int g = tau.genus();
  cfg.genus = g;
  cfg.validate();
  const CVec z = a.z.empty() ? CVec(CVec::Zero(g)) : parse_point(a.z, g);
  Characteristic c(BinaryVector::zero(g), BinaryVector::zero(g));
  if (!a.characteristic.empty()) {
    try {
      c = Characteristic::parse(a.characteristic);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (c.size() != g)
      throw UsageError("characteristic " + c.str() + " has length " + std::to_string(c.size()) + " but the genus is " +
                       std::to_string(g));
  }
  TruncationSpec spec;
  spec.eps_abs = cfg.truncation_eps;
  const auto ev = theta_char(tau, z, c, spec);
  Json doc{{"command", "eval-theta"}, {"config", json::to_json(cfg)}};
  doc["tau_digest"] = json::digest(tau.matrix());
  doc["characteristic"] = c.str();
  doc["parity"] = to_string(parity(c));
  doc["z"] = json::vector(z);
  doc["value"] = json::complex(ev.value);
  doc["log_envelope"] = ev.truncation.log_envelope;
  doc["truncation"] = json::to_json(ev.truncation);
  doc["vanishing"] = std::abs(ev.value) <= ev.truncation.tail_bound;
  emit(doc, cfg, out);
  return exit_ok;
}

// ------------------------------------------------------------- period-matrix

int cmd_period_matrix(const std::string& branches, RunConfig cfg, std::ostream& out) {
  std::optional<BranchConfig> bc;
  try {
    bc.emplace(parse_reals(branches));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.genus = bc->genus();
  cfg.validate();
  const auto pd = period_matrix<double>(*bc, cfg.quad_nodes);
  const auto w = weierstrass_images(pd.tau);
  TruncationSpec spec;
  spec.eps_abs = cfg.truncation_eps;
  const auto vanishing = riemann_vanishing_check(pd.tau, w, spec);
  Json doc{{"command", "period-matrix"}, {"config", json::to_json(cfg)}};
  doc["branches"] = bc->points();
  doc["period_data"] = json::to_json(pd);
  doc["tau_digest"] = json::digest(pd.tau.matrix());
  doc["weierstrass_images"] = json::to_json(w);
  doc["R"] = Json{{"a", json::int_vector(w.a[1])}, {"b", json::int_vector(w.b[1])}, {"image", json::vector(w.r_shift)}};
  doc["vanishing"] = json::to_json(vanishing);
  emit(doc, cfg, out);
  return exit_ok;
}

// ---------------------------------------------------------------- gen-cubics

int cmd_gen_cubics(bool check_fixtures, RunConfig cfg, std::ostream& out, std::ostream& err) {
  if (cfg.genus < 2 || cfg.genus > 6) throw UsageError("--genus must be between 2 and 6");
  const auto family = gen_cubics(cfg.genus);
  Json doc{{"command", "gen-cubics"}, {"config", json::to_json(cfg)}};
  Json ids = Json::array();
  for (const auto& [sigma, id] : family) ids.push_back(json::to_json(id));
  doc["identities"] = std::move(ids);
  int rc = exit_ok;
  if (check_fixtures) {
    Json checks = Json::array();
    std::map<int, std::map<BinaryVector, CubicIdentity>> cache;
    for (const auto& ref : reference_cubics()) {
      if (!cache.count(ref.genus)) cache[ref.genus] = gen_cubics(ref.genus);
      const auto sigma = BinaryVector::parse(ref.sigma);
      const auto expected = parse_printed_cubic(ref.genus, sigma, ref.printed);
      const auto diff = first_difference(expected, cache[ref.genus].at(sigma));
      Json entry{{"genus", ref.genus}, {"sigma", ref.sigma}, {"match", !diff}};
      if (diff) {
        entry["first_difference"] = *diff;
        err << "fixture mismatch (genus " << ref.genus << ", sigma " << ref.sigma << "): " << *diff << "\n";
        rc = exit_mismatch;
      }
      checks.push_back(std::move(entry));
    }
    doc["fixture_check"] = std::move(checks);
  }
  emit(doc, cfg, out);
  return rc;
}

// -------------------------------------------------------------------- verify

const std::vector<std::string> kSuites{"fact1", "mess", "lastadd", "cubics", "secant", "nondegeneracy", "final-remark"};

struct VerifyArgs {
  std::vector<std::string> suites;
  std::string branches;
  bool random_branches = false;
  bool random_tau = false;
  std::string tau_path;
  std::string expect = "pass";
  std::string points = "auto";
  int threads = 1;
  int samples = 10;
};

struct VerifyContext {
  Tau tau;
  AdditionPoints pts;
  RunConfig cfg;
  VerifierConfig vc;
  int threads;
  int samples;
  bool expect_pass;
  std::string digest;
  bool weierstrass;
};

// Draws x, y until the denominators are usable; NaN when every draw fails.
template <typename F>
auto with_resampling(std::mt19937_64& rng, F&& f) -> decltype(f(rng)) {
  for (int attempt = 0;; ++attempt) {
    try {
      return f(rng);
    } catch (const DegenerateSample&) {
      if (attempt == 19) throw;
    }
  }
}

IdentityReport new_report(const VerifyContext& ctx, std::string id, bool expect_pass) {
  IdentityReport r;
  r.identity_id = std::move(id);
  r.tolerance = ctx.cfg.tolerance;
  r.expect_pass = expect_pass;
  return r;
}

Json base_inputs(const VerifyContext& ctx) { return Json{{"tau_digest", ctx.digest}}; }

void suite_fact1(const VerifyContext& ctx, std::vector<IdentityReport>& reports) {
  const int g = ctx.tau.genus();
  auto rows = parallel_map<ReportSample>(static_cast<std::size_t>(ctx.samples), ctx.threads, [&](std::size_t i) {
    auto rng = sample_rng(ctx.cfg.seed, 1, i);
    ReportSample s{base_inputs(ctx), NAN};
    try {
      with_resampling(rng, [&](std::mt19937_64& r) {
        const CVec x = random_point(ctx.tau, r, 0.5), y = random_point(ctx.tau, r, 0.5);
        const auto f = eval_fact1(ctx.tau, ctx.pts, x, y, ctx.vc);
        s.inputs["x"] = json::vector(x);
        s.inputs["y"] = json::vector(y);
        s.residual = f.residual;
        return 0;
      });
    } catch (const DegenerateSample& e) {
      s.inputs["error"] = e.what();
    }
    (void)g;
    return s;
  });
  auto rep = new_report(ctx, "fact1", ctx.expect_pass);
  for (auto& s : rows) rep.add(std::move(s));
  reports.push_back(std::move(rep));
}

void suite_mess(const VerifyContext& ctx, std::vector<IdentityReport>& reports) {
  using Pair = std::pair<ReportSample, ReportSample>;
  auto rows = parallel_map<Pair>(static_cast<std::size_t>(ctx.samples), ctx.threads, [&](std::size_t i) {
    auto rng = sample_rng(ctx.cfg.seed, 2, i);
    Pair p{{base_inputs(ctx), NAN}, {base_inputs(ctx), NAN}};
    try {
      with_resampling(rng, [&](std::mt19937_64& r) {
        const CVec z = random_point(ctx.tau, r, 0.5), w = random_point(ctx.tau, r, 0.5);
        const auto m = eval_mess(ctx.tau, ctx.pts, z, w, ctx.vc);
        for (auto* s : {&p.first, &p.second}) {
          s->inputs["z"] = json::vector(z);
          s->inputs["w"] = json::vector(w);
        }
        p.first.residual = m.max_residual;
        p.second.residual = m.chain_residual;
        return 0;
      });
    } catch (const DegenerateSample& e) {
      p.first.inputs["error"] = p.second.inputs["error"] = e.what();
    }
    return p;
  });
  auto rep = new_report(ctx, "mess", ctx.expect_pass);
  auto chain = new_report(ctx, "mess.chain", true);
  for (auto& [a, b] : rows) {
    rep.add(std::move(a));
    chain.add(std::move(b));
  }
  reports.push_back(std::move(rep));
  reports.push_back(std::move(chain));
}

void suite_lastadd(const VerifyContext& ctx, std::vector<IdentityReport>& reports) {
  using Pair = std::pair<ReportSample, ReportSample>;
  auto rows = parallel_map<Pair>(static_cast<std::size_t>(ctx.samples), ctx.threads, [&](std::size_t i) {
    auto rng = sample_rng(ctx.cfg.seed, 3, i);
    Pair p{{base_inputs(ctx), NAN}, {base_inputs(ctx), NAN}};
    try {
      with_resampling(rng, [&](std::mt19937_64& r) {
        const CVec z = random_point(ctx.tau, r, 0.5);
        const auto l = eval_lastadd(ctx.tau, ctx.pts, z, ctx.vc);
        p.first.inputs["z"] = p.second.inputs["z"] = json::vector(z);
        p.first.residual = l.max_residual;
        p.second.residual = l.chain_residual;
        return 0;
      });
    } catch (const DegenerateSample& e) {
      p.first.inputs["error"] = p.second.inputs["error"] = e.what();
    }
    return p;
  });
  auto rep = new_report(ctx, "lastadd", ctx.expect_pass);
  auto chain = new_report(ctx, "lastadd.chain", true);
  for (auto& [a, b] : rows) {
    rep.add(std::move(a));
    chain.add(std::move(b));
  }
  reports.push_back(std::move(rep));
  reports.push_back(std::move(chain));
  if (ctx.pts.labels) {
    // an automorphy statement, true for every tau
    auto ratio = new_report(ctx, "lastadd.coefficient_ratio", true);
    for (const auto& e : coefficient_ratio_check(ctx.tau, ctx.pts, ctx.vc)) {
      Json in = base_inputs(ctx);
      in["k"] = e.k;
      in["computed"] = json::complex(e.computed);
      in["corrected"] = json::complex(e.corrected);
      in["printed"] = json::complex(e.printed);
      ratio.add({std::move(in), e.residual});
    }
    reports.push_back(std::move(ratio));
  }
}

void suite_cubics(const VerifyContext& ctx, std::vector<IdentityReport>& reports) {
  const int g = ctx.tau.genus();
  const auto family = gen_cubics(g);
  std::vector<const CubicIdentity*> ids;
  for (const auto& [s, id] : family) ids.push_back(&id);
  const std::size_t per = static_cast<std::size_t>(ctx.samples) + 1;  // z = 0 first
  auto rows = parallel_map<ReportSample>(ids.size() * per, ctx.threads, [&](std::size_t i) {
    const CubicIdentity& id = *ids[i / per];
    const std::size_t j = i % per;
    CVec z = CVec::Zero(g);
    if (j > 0) {
      auto rng = sample_rng(ctx.cfg.seed, 4, i);
      z = random_point(ctx.tau, rng);
    }
    ReportSample s{base_inputs(ctx), 0};
    s.inputs["sigma"] = id.sigma.str();
    s.inputs["z"] = json::vector(z);
    s.residual = eval_cubic(ctx.tau, id, z, ctx.vc).residual;
    return s;
  });
  auto rep = new_report(ctx, "cubics", ctx.expect_pass);
  for (auto& s : rows) rep.add(std::move(s));
  reports.push_back(std::move(rep));
}

// Residual of a rank statement: the first singular value past the claimed
// rank relative to the largest.
double rank_residual(const SecantReport& r, int claimed) {
  const auto k = static_cast<std::size_t>(claimed);
  if (r.singular_values.size() <= k || r.singular_values.front() == 0) return 0;
  return r.singular_values[k] / r.singular_values.front();
}

void suite_secant(const VerifyContext& ctx, std::vector<IdentityReport>& reports, Json& doc) {
  const int g = ctx.tau.genus();
  using Pair = std::pair<ReportSample, ReportSample>;
  auto rows = parallel_map<Pair>(static_cast<std::size_t>(ctx.samples), ctx.threads, [&](std::size_t i) {
    auto rng = sample_rng(ctx.cfg.seed, 5, i);
    const CVec z = random_point(ctx.tau, rng);
    const auto multi = secant_rank(ctx.tau, ctx.pts.A, z, ctx.vc);
    // the trisecant needs x and the A_i on the curve: four distinct
    // Weierstrass images when available
    CVec x;
    std::array<CVec, 3> base{ctx.pts.A[0], ctx.pts.A[1], ctx.pts.A[2]};
    Json picked;
    if (ctx.weierstrass) {
      const auto w = weierstrass_images(ctx.tau);
      std::vector<int> idx(w.images.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      x = w.images[static_cast<std::size_t>(idx[0])];
      for (std::size_t k = 0; k < 3; ++k) base[k] = w.images[static_cast<std::size_t>(idx[k + 1])];
      picked = Json::array({idx[0] + 1, idx[1] + 1, idx[2] + 1, idx[3] + 1});
    } else {
      x = random_point(ctx.tau, rng);
    }
    const auto tri = secant_rank(ctx.tau, fay_trisecant_points(x, base), CVec(CVec::Zero(g)), ctx.vc);
    Pair p{{base_inputs(ctx), rank_residual(multi, g + 1)}, {base_inputs(ctx), rank_residual(tri, 2)}};
    p.first.inputs["z"] = json::vector(z);
    p.first.inputs["secant"] = json::to_json(multi);
    p.second.inputs["x"] = json::vector(x);
    if (!picked.is_null()) p.second.inputs["weierstrass_points"] = std::move(picked);
    p.second.inputs["secant"] = json::to_json(tri);
    return p;
  });
  auto multi = new_report(ctx, "secant.multisecant", ctx.expect_pass);
  auto tri = new_report(ctx, "secant.trisecant", ctx.expect_pass);
  for (auto& [a, b] : rows) {
    multi.add(std::move(a));
    tri.add(std::move(b));
  }
  reports.push_back(std::move(multi));
  reports.push_back(std::move(tri));
  Json pairs = Json::array();
  for (const auto& e : general_position_pairs(ctx.tau, ctx.pts.A, ctx.vc))
    pairs.push_back(Json{{"k", e.k}, {"l", e.l}, {"satisfied", e.satisfied}, {"secant", json::to_json(e.report)}});
  doc["general_position"] = std::move(pairs);
}

void suite_nondegeneracy(const VerifyContext& ctx, std::vector<IdentityReport>& reports, Json& doc) {
  const int g = ctx.tau.genus();
  std::vector<CubicIdentity> family;
  for (const auto& [s, id] : gen_cubics(g)) family.push_back(id);
  auto rng = sample_rng(ctx.cfg.seed, 6, 0);
  std::vector<CVec> zs;
  for (int i = 0; i < std::max(ctx.samples, 25); ++i) zs.push_back(random_point(ctx.tau, rng));
  const auto r = nondegeneracy_check(ctx.tau, family, zs, ctx.vc);
  doc["nondegeneracy"] = json::to_json(r);
  // a side condition of the cubic criterion, expected on every tau
  auto rep = new_report(ctx, "nondegeneracy", true);
  Json in = base_inputs(ctx);
  in["z_samples"] = static_cast<int>(zs.size());
  rep.add({std::move(in), r.nondegenerate ? 0.0 : 1.0});
  reports.push_back(std::move(rep));
}

void suite_final_remark(const VerifyContext& ctx, Json& doc) {
  const int g = ctx.tau.genus();
  if (g < 3 || g > 4) {
    doc["final_remark"] = Json{{"skipped", "genus 3 or 4 only"}};
    return;
  }
  std::vector<CubicIdentity> family;
  for (const auto& [s, id] : gen_cubics(g)) family.push_back(id);
  auto rng = sample_rng(ctx.cfg.seed, 7, 0);
  doc["final_remark"] = json::to_json(final_remark_experiment(ctx.tau, family, rng, ctx.samples, ctx.cfg.tolerance, ctx.vc));
}

AdditionPoints random_addition_points(const Tau& tau, std::mt19937_64& rng) {
  AdditionPoints pts;
  const int g = tau.genus();
  pts.A.push_back(CVec::Zero(g));
  for (int i = 0; i <= g; ++i) pts.A.push_back(random_point(tau, rng, 0.3));
  pts.R = random_point(tau, rng, 0.3);
  return pts;
}

int cmd_verify(VerifyArgs a, RunConfig cfg, bool genus_given, std::ostream& out, std::ostream& err) {
  cfg.validate();
  if (a.suites.empty()) throw UsageError("no --suite given");
  if (a.suites.size() == 1 && a.suites[0] == "all") a.suites = kSuites;
  for (const auto& s : a.suites)
    if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end()) throw UsageError("unknown suite '" + s + "'");
  if (a.samples < 1) throw UsageError("--samples must be positive");
  const int sources = int(!a.branches.empty()) + int(a.random_branches) + int(a.random_tau) + int(!a.tau_path.empty());
  if (sources != 1) throw UsageError("give exactly one of --branches, --random-branches, --random-tau, --tau");
  if ((a.random_tau || a.random_branches) && !genus_given) throw UsageError("random sources need --genus");
  if ((a.random_tau || a.random_branches) && cfg.genus < 1) throw UsageError("--genus must be positive");

  std::mt19937_64 master(cfg.seed);
  Json source;
  std::optional<Tau> tau;
  if (!a.branches.empty() || a.random_branches) {
    std::optional<BranchConfig> bc;
    try {
      bc.emplace(a.random_branches ? random_branch_config(cfg.genus, master) : BranchConfig(parse_reals(a.branches)));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    source = Json{{"kind", a.random_branches ? "random-branches" : "branches"}, {"branches", bc->points()}};
    tau.emplace(period_matrix<double>(*bc, cfg.quad_nodes).tau);
  } else if (a.random_tau) {
    source = Json{{"kind", "random-tau"}};
    tau.emplace(random_siegel(cfg.genus, master));
  } else {
    source = Json{{"kind", "file"}, {"path", a.tau_path}};
    tau.emplace(read_tau(a.tau_path));
  }
  if (genus_given && tau->genus() != cfg.genus)
    throw UsageError("--genus " + std::to_string(cfg.genus) + " does not match the period matrix (genus " +
                     std::to_string(tau->genus()) + ")");
  cfg.genus = tau->genus();
  if (cfg.genus < 2) throw UsageError("verification needs genus at least 2");

  if (a.points == "auto") a.points = a.random_tau ? "random" : "weierstrass";
  if (a.points != "weierstrass" && a.points != "random") throw UsageError("--points must be auto, weierstrass or random");
  VerifyContext ctx{*tau,
                    a.points == "random" ? random_addition_points(*tau, master) : hyperelliptic_addition_points(*tau),
                    cfg,
                    verifier_config(cfg),
                    resolve_threads(a.threads),
                    a.samples,
                    a.expect == "pass",
                    json::digest(tau->matrix()),
                    a.points == "weierstrass"};

  Json doc{{"command", "verify"}, {"config", json::to_json(cfg)}};
  doc["source"] = std::move(source);
  doc["tau"] = json::matrix(tau->matrix());
  doc["tau_digest"] = ctx.digest;
  doc["suites"] = a.suites;
  doc["expect"] = a.expect;
  Json pts{{"kind", a.points}, {"A", Json::array()}, {"R", json::vector(ctx.pts.R)}};
  for (const auto& p : ctx.pts.A) pts["A"].push_back(json::vector(p));
  doc["addition_points"] = std::move(pts);

  std::vector<IdentityReport> reports;
  for (const auto& s : a.suites) {
    if (s == "fact1") suite_fact1(ctx, reports);
    else if (s == "mess") suite_mess(ctx, reports);
    else if (s == "lastadd") suite_lastadd(ctx, reports);
    else if (s == "cubics") suite_cubics(ctx, reports);
    else if (s == "secant") suite_secant(ctx, reports, doc);
    else if (s == "nondegeneracy") suite_nondegeneracy(ctx, reports, doc);
    else suite_final_remark(ctx, doc);
  }
  bool all_match = true;
  Json rj = Json::array();
  for (const auto& r : reports) {
    all_match = all_match && r.matches_expectation();
    rj.push_back(json::to_json(r));
    err << r.identity_id << ": max residual " << r.max_residual << " (" << (r.passed() ? "pass" : "fail")
        << ", expected " << (r.expect_pass ? "pass" : "fail") << ")\n";
  }
  doc["reports"] = std::move(rj);
  doc["all_match"] = all_match;
  emit(doc, cfg, out);
  return all_match ? exit_ok : exit_mismatch;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Theta functions, cubic identities and Jacobian checks for hyperelliptic curves", "hyperjac"};
  app.require_subcommand(1);

  RunConfig cfg;

  auto* eval = app.add_subcommand("eval-theta", "evaluate theta[eps;delta](tau, z)");
  EvalThetaArgs ea;
  eval->add_option("--tau", ea.tau_path, "JSON file with the period matrix")->required();
  eval->add_option("--z", ea.z, "comma-separated reals or a JSON array (default 0)");
  eval->add_option("--char", ea.characteristic, "characteristic such as [01;10] (default zero)");
  add_common_options(*eval, cfg);

  auto* pm = app.add_subcommand("period-matrix", "period matrix of y^2 = prod(x - p_i)");
  std::string branches;
  pm->add_option("--branches", branches, "comma-separated increasing real branch points")->required()->allow_extra_args(false);
  pm->add_option("--nodes", cfg.quad_nodes, "Gauss-Chebyshev nodes per segment")->capture_default_str();
  add_common_options(*pm, cfg);

  auto* gc = app.add_subcommand("gen-cubics", "generate the cubic identities of a genus");
  bool check_fixtures = false;
  gc->add_option("--genus", cfg.genus, "2..6")->required();
  gc->add_flag("--check-fixtures", check_fixtures, "compare genus 3 and 4 against the stored cubics");
  add_common_options(*gc, cfg);

  auto* vf = app.add_subcommand("verify", "run verification suites");
  VerifyArgs va;
  vf->add_option("--suite", va.suites, "fact1 mess lastadd cubics secant nondegeneracy final-remark, or all")
      ->required()
      ->delimiter(',');
  vf->add_option("--branches", va.branches, "real branch points (positive control)");
  vf->add_flag("--random-branches", va.random_branches, "random real branch points from --seed");
  vf->add_flag("--random-tau", va.random_tau, "random Siegel matrix from --seed (negative control)");
  vf->add_option("--tau", va.tau_path, "JSON file with the period matrix");
  auto* genus_opt = vf->add_option("--genus", cfg.genus);
  vf->add_option("--seed", cfg.seed)->capture_default_str();
  vf->add_option("--expect", va.expect)->check(CLI::IsMember({"pass", "fail"}))->capture_default_str();
  vf->add_option("--points", va.points, "addition points: auto, weierstrass or random")->capture_default_str();
  vf->add_option("--threads", va.threads, "worker threads (capped by THETA_SECANT_THREADS)")->capture_default_str();
  vf->add_option("--samples", va.samples, "random samples per suite")->capture_default_str();
  vf->add_option("--nodes", cfg.quad_nodes, "Gauss-Chebyshev nodes per segment")->capture_default_str();
  add_common_options(*vf, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*eval) return cmd_eval_theta(ea, cfg, out);
    if (*pm) return cmd_period_matrix(branches, cfg, out);
    if (*gc) return cmd_gen_cubics(check_fixtures, cfg, out, err);
    return cmd_verify(va, cfg, genus_opt->count() > 0, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_mismatch;
  }
}

}  // namespace hyperjac

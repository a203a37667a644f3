#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "hyperjac/cli.hpp"
#include "hyperjac/report_json.hpp"

using namespace hyperjac;
namespace fs = std::filesystem;

namespace {

struct Run {
  int rc;
  std::string out, err;
  Json doc() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hyperjac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

// The installed binary, for exit status and stream separation.
Run run_binary(const std::string& args) {
  const std::string cmd = std::string(HYPERJAC_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, ""};
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / ("hyperjac_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

const std::string kG2 = "--branches=-5,-3,-1,1,3,5";
const std::string kG3 = "--branches=-5,-3,-1,1,3,5,7.5,9";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("json helpers") {
  const Complex v(0.1, 1.0 / 3.0);
  const Json back = Json::parse(json::dump(json::complex(v)));
  CHECK(json::complex_from(back) == v);
  CHECK(json::complex_from(Json(2.5)) == Complex(2.5, 0));
  CHECK_THROWS_AS(json::complex_from(Json::array({1, 2, 3})), std::invalid_argument);
  CHECK_THROWS_AS(json::matrix_from(Json::parse("[[1, 2], [3]]")), std::invalid_argument);
  CMat m(2, 2);
  m << Complex(0, 1), 0.25, 0.25, Complex(0, 2);
  CHECK(json::matrix_from(json::matrix(m)) == m);
  CHECK(json::digest(m).size() == 16);
  CMat m2 = m;
  m2(1, 1) += Complex(0, 1e-15);
  CHECK(json::digest(m) != json::digest(m2));

  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.truncation_eps = c.tolerance;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  IdentityReport r;
  r.tolerance = 1e-6;
  r.add({Json::object(), 1e-9});
  CHECK(r.passed());
  r.add({Json::object(), NAN});
  CHECK_FALSE(r.passed());
}

TEST_CASE("cubic identity schema") {
  const auto fam = gen_cubics(3);
  const Json j = json::to_json(fam.at(BinaryVector::parse("000")));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"genus", "sigma", "content", "monomials"});
  CHECK(j["sigma"] == "000");
  CHECK(j["monomials"][0]["factors"] == Json::array({"000", "101", "101"}));
  for (const auto& [s, id] : fam) CHECK(json::cubic_from(json::to_json(id)) == id);
}

TEST_CASE("eval-theta") {
  const auto dir = scratch_dir();
  const auto tau_path = (dir / "tau.json").string();
  std::ofstream(tau_path) << "[[[0, 1.2], [0.3, 0.1]], [[0.3, 0.1], [0, 0.9]]]";

  auto r = run({"eval-theta", "--tau", tau_path, "--z", "0,0", "--char", "[00;00]"});
  REQUIRE(r.rc == 0);
  auto d = r.doc();
  CHECK(d["config"]["genus"] == 2);
  CHECK(d["value"].size() == 2);
  CHECK(d["truncation"]["term_count"].get<int>() > 0);
  CHECK(d["truncation"]["radius"].get<double>() > 0);
  CHECK(d["vanishing"] == false);

  r = run({"eval-theta", "--tau", tau_path, "--char", "[10;10]"});
  REQUIRE(r.rc == 0);
  d = r.doc();
  CHECK(d["parity"] == "odd");
  CHECK(d["vanishing"] == true);

  r = run({"eval-theta", "--tau", tau_path, "--z", "[[0.1, 0.2], 0.3]", "--char", "[01;11]"});
  CHECK(r.rc == 0);

  r = run({"eval-theta", "--tau", (dir / "missing.json").string()});
  CHECK(r.rc == 2);
  CHECK(r.err.find("missing.json") != std::string::npos);

  CHECK(run({"eval-theta", "--tau", tau_path, "--char", "[0x;00]"}).rc == 2);
  CHECK(run({"eval-theta", "--tau", tau_path, "--char", "[000;000]"}).rc == 2);
  CHECK(run({"eval-theta", "--tau", tau_path, "--z", "0,0,0"}).rc == 2);

  std::ofstream(dir / "bad.json") << "[[[0, 1], 0.5], [0.4, [0, 1]]]";
  r = run({"eval-theta", "--tau", (dir / "bad.json").string()});
  CHECK(r.rc == 2);
  CHECK(r.err.find("symmetric") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("period-matrix") {
  auto r = run({"period-matrix", kG2});
  REQUIRE(r.rc == 0);
  auto d = r.doc();
  const CMat tau = json::matrix_from(d["period_data"]["tau"]);
  CHECK((tau - tau.transpose()).cwiseAbs().maxCoeff() == 0);
  CHECK(tau(0, 0).imag() > 0);
  CHECK(tau.imag().determinant() > 0);
  CHECK(d["weierstrass_images"].size() == 6);
  CHECK(d["vanishing"]["all_ok"] == true);

  r = run({"period-matrix", kG3});
  REQUIRE(r.rc == 0);
  d = r.doc();
  CHECK(d["config"]["genus"] == 3);
  CHECK(d["R"]["a"] == Json::array({0, 0, 0}));
  CHECK(d["R"]["b"] == Json::array({1, 0, 0}));
  const CVec R = json::vector_from(d["R"]["image"]);
  CHECK(R[0] == Complex(0.5, 0));
  CHECK(R[1] == Complex(0, 0));

  CHECK(run({"period-matrix", "--branches=-5,-3,-1,1,3,5,7"}).rc == 2);
  CHECK(run({"period-matrix", "--branches=-5,-3,1,-1,3,5"}).rc == 2);
  CHECK(run({"period-matrix", "--branches=-5,-3,-1,1,3,abc"}).rc == 2);
  CHECK(run({"period-matrix", kG2, "--nodes", "3"}).rc == 1);  // quadrature does not settle
}

TEST_CASE("gen-cubics") {
  auto r = run({"gen-cubics", "--genus", "2"});
  REQUIRE(r.rc == 0);
  auto d = r.doc();
  REQUIRE(d["identities"].size() == 4);
  for (const auto& id : d["identities"]) CHECK(id["monomials"].empty());

  r = run({"gen-cubics", "--genus", "3"});
  REQUIRE(r.rc == 0);
  d = r.doc();
  REQUIRE(d["identities"].size() == 8);
  for (const auto& id : d["identities"]) CHECK(id["monomials"].size() == 4);

  r = run({"gen-cubics", "--genus", "4", "--check-fixtures"});
  REQUIRE(r.rc == 0);
  d = r.doc();
  REQUIRE(d["fixture_check"].size() == 3);
  for (const auto& c : d["fixture_check"]) CHECK(c["match"] == true);

  CHECK(run({"gen-cubics", "--genus", "7"}).rc == 2);
  CHECK(run({"gen-cubics"}).rc == 2);

  const auto dir = scratch_dir();
  const auto path = (dir / "g3.json").string();
  r = run({"gen-cubics", "--genus", "3", "--output", path});
  CHECK(r.rc == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const Json f = Json::parse(in);
  CHECK(f["config"]["output_path"] == path);
  CHECK(f["identities"].size() == 8);
  fs::remove_all(dir);
}

TEST_CASE("verify controls") {
  auto r = run({"verify", "--suite", "cubics", "--random-branches", "--genus", "4", "--seed", "3", "--expect", "pass"});
  CHECK(r.rc == 0);
  CHECK(r.doc()["reports"][0]["verdict"] == "pass");

  r = run({"verify", "--suite", "cubics", "--random-tau", "--genus", "4", "--seed", "7", "--expect", "fail"});
  CHECK(r.rc == 0);
  CHECK(r.doc()["reports"][0]["verdict"] == "fail");
  CHECK(r.doc()["reports"][0]["max_residual"].get<double>() > 1e-2);

  // same run without the expectation flag is a mismatch
  CHECK(run({"verify", "--suite", "cubics", "--random-tau", "--genus", "4", "--seed", "7"}).rc == 1);

  r = run({"verify", "--suite", "secant", kG3});
  REQUIRE(r.rc == 0);
  const auto d = r.doc();
  for (const auto& s : d["reports"][0]["samples"]) {
    CHECK(s["inputs"]["secant"]["decided_rank"] == 4);
    CHECK(s["inputs"]["secant"]["matrix_shape"] == Json::array({5, 8}));
  }
  for (const auto& s : d["reports"][1]["samples"]) CHECK(s["inputs"]["secant"]["decided_rank"] == 2);
  CHECK(d["general_position"].size() == 10);

  r = run({"verify", "--suite", "fact1,mess,lastadd", kG3, "--samples", "4"});
  CHECK(r.rc == 0);
  const Json chain = r.doc();
  std::vector<std::string> ids;
  for (const auto& rep : chain["reports"]) ids.push_back(rep["identity_id"].get<std::string>());
  CHECK(ids == std::vector<std::string>{"fact1", "mess", "mess.chain", "lastadd", "lastadd.chain",
                                        "lastadd.coefficient_ratio"});
  for (const auto& rep : chain["reports"]) CHECK(rep["samples"].size() >= 3);

  r = run({"verify", "--suite", "final-remark,nondegeneracy", kG3});
  CHECK(r.rc == 0);
  CHECK(r.doc()["final_remark"]["order_two_points"] == 64);
  CHECK(r.doc()["nondegeneracy"]["nondegenerate"] == true);
}

TEST_CASE("verify usage errors") {
  CHECK(run({"verify", "--suite", "bogus", kG3}).rc == 2);
  CHECK(run({"verify", "--suite", "cubics"}).rc == 2);
  CHECK(run({"verify", "--suite", "cubics", kG3, "--random-tau", "--genus", "3"}).rc == 2);
  CHECK(run({"verify", "--suite", "cubics", kG3, "--genus", "4"}).rc == 2);
  CHECK(run({"verify", "--suite", "cubics", "--random-tau"}).rc == 2);
  CHECK(run({"verify", "--suite", "cubics", kG3, "--expect", "maybe"}).rc == 2);
  CHECK(run({"verify", "--suite", "cubics", kG3, "--tolerance", "1e-16"}).rc == 2);
  CHECK(run({"nonsense"}).rc == 2);
  CHECK(run({"--help"}).rc == 0);
}

TEST_CASE("verify output is independent of the worker count") {
  std::string first;
  for (const char* t : {"1", "2", "8"}) {
    const auto r = run({"verify", "--suite", "all", "--random-branches", "--genus", "3", "--seed", "17", "--samples",
                        "4", "--threads", t});
    REQUIRE(r.rc == 0);
    if (first.empty()) first = r.out;
    CHECK(r.out == first);
  }
  const auto other = run({"verify", "--suite", "all", "--random-branches", "--genus", "3", "--seed", "18", "--samples", "4"});
  CHECK(other.out != first);
}

TEST_CASE("binary exit codes") {
  auto r = run_binary("gen-cubics --genus 2");
  CHECK(r.rc == 0);
  CHECK(Json::parse(r.out)["identities"].size() == 4);
  CHECK(run_binary("period-matrix --branches -5,-3,-1,1,3,5,7").rc == 2);
  r = run_binary("period-matrix --branches -5,-3,-1,1,3,5");
  CHECK(r.rc == 0);
  CHECK(Json::parse(r.out)["config"]["genus"] == 2);
  CHECK(run_binary("verify --suite cubics --random-tau --genus 3 --seed 1").rc == 1);
  CHECK(run_binary("verify --suite cubics --random-tau --genus 3 --seed 1 --expect fail").rc == 0);
}

}

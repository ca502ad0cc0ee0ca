#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "circext/cli.hpp"
#include "circext/errors.hpp"
#include "circext/plot.hpp"
#include "circext/report.hpp"

using namespace circext;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "circext");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json result_of(const Outcome& o) { return nlohmann::json::parse(o.out); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("rho command reports value, method and the dual evaluation") {
  const auto o = invoke({"rho", "--r", "1.5"});
  REQUIRE(o.code == cli::kExitPass);
  const auto j = result_of(o);
  CHECK(j["schema_version"] == report::kSchemaVersion);
  CHECK(j["command"] == "rho");
  CHECK(j["result"]["method"] == "elliptic");
  CHECK(j["result"]["dual_check"]["relative_difference"].get<double>() < 1e-8);
  const auto csv = invoke({"rho", "--r", "0.5", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("key,value\n", 0) == 0);
}

TEST_CASE("exit code 2: usage errors") {
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kExitUsage);
  CHECK(invoke({"rho"}).code == cli::kExitUsage);
  CHECK(invoke({"rho", "--r", "abc"}).code == cli::kExitUsage);
  CHECK(invoke({"rho", "--r", "0.5", "--eps", "0.1"}).code == cli::kExitUsage);
  CHECK(invoke({"rho", "--r", "0.5", "--tol", "-1"}).code == cli::kExitUsage);
  CHECK(invoke({"rho", "--r", "-0.5"}).code == cli::kExitUsage);
  CHECK(invoke({"rho", "--r", "0.5", "--format", "svg"}).code == cli::kExitUsage);
  CHECK(invoke({"rho", "--r", "0.5", "--format", "xml"}).code == cli::kExitUsage);
  CHECK(invoke({"certify"}).code == cli::kExitUsage);
  CHECK(invoke({"certify", "--lemma", "no_such_lemma"}).code == cli::kExitUsage);
  CHECK(invoke({"certify", "--all", "--lemma", "trig_log"}).code == cli::kExitUsage);
  CHECK(invoke({"certify", "--all", "--bound-scale", "0"}).code == cli::kExitUsage);
  CHECK(invoke({"certify", "--all", "--jobs", "-2"}).code == cli::kExitUsage);
  CHECK(invoke({"scan", "--lo", "0.1", "--hi", "0.05"}).code == cli::kExitUsage);
  CHECK(invoke({"scan", "--hi", "0.5", "--points", "2"}).code == cli::kExitUsage);
  CHECK(invoke({"spectrum", "--N", "3"}).code == cli::kExitUsage);
  CHECK(invoke({"spectrum", "--study", "bogus"}).code == cli::kExitUsage);
  CHECK(invoke({"spectrum", "--study", "scaling", "--N-list", "8,9"}).code == cli::kExitUsage);
  CHECK(invoke({"report", "--tol", "1e-6"}).code == cli::kExitUsage);
  const auto o = invoke({"rho", "--r", "x"});
  CHECK(o.err.find("usage:") != std::string::npos);
}

TEST_CASE("unknown keys are rejected by run() as well as by the parser") {
  cli::RunConfig cfg;
  cfg.command = cli::Command::rho;
  cfg.parameters = {{"r", "0.5"}, {"grid-s", "10"}};
  std::ostringstream out, err;
  CHECK(cli::run(cfg, out, err) == cli::kExitUsage);
}

TEST_CASE("exit code 3: numerical and I/O failures, with a partial report") {
  const auto o = invoke({"rho", "--r", "1"});
  CHECK(o.code == cli::kExitNumerical);
  const auto j = result_of(o);
  CHECK(j["error"]["type"] == "singularity");
  CHECK(invoke({"rho", "--r", "0.5", "--out", "/nonexistent-dir/x.json"}).code == cli::kExitNumerical);
  CHECK(invoke({"scan", "--points", "1", "--grid-s", "20", "--grid-alpha", "36", "--plot", "/nonexistent-dir/p.svg"})
            .code == cli::kExitNumerical);
}

TEST_CASE("certify: every lemma passes at eps = 1/20 and fails when tightened 100x") {
  const auto ok = invoke({"certify", "--all", "--eps", "0.05"});
  CHECK(ok.code == cli::kExitPass);
  const auto j = result_of(ok);
  CHECK(j["result"]["passed"] == true);
  CHECK(j["result"]["reports"].size() == 8);
  for (const auto& r : j["result"]["reports"]) CHECK(r["status"] == "passed");

  for (const char* lemma : {"rho_asymptotics", "aux_integrals", "psi_bounds", "expansion_error", "trig_log",
                            "multiplier_lower", "cauchy_schwarz_factor", "step5"}) {
    CAPTURE(lemma);
    CHECK(invoke({"certify", "--lemma", lemma, "--bound-scale", "0.01"}).code == cli::kExitFailed);
  }
}

TEST_CASE("certify: the multiplier bound fails beyond the threshold radius") {
  const auto o = invoke({"certify", "--lemma", "multiplier_lower", "--eps", "0.12", "--grid-s", "40", "--grid-alpha", "90"});
  CHECK(o.code == cli::kExitFailed);
}

TEST_CASE("identical configurations give byte-identical output") {
  const std::vector<std::string> args = {"certify", "--lemma", "trig_log,step5,cauchy_schwarz_factor", "--jobs", "1"};
  const auto a = invoke(args), b = invoke(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const std::vector<std::string> par = {"certify", "--lemma", "trig_log,step5,cauchy_schwarz_factor", "--jobs", "3"};
  const auto c = invoke(par);
  // only the echoed parameters differ between job counts
  auto ja = result_of(a), jc = result_of(c);
  CHECK(ja["result"] == jc["result"]);
  const std::vector<std::string> csv = {"spectrum", "--N", "6", "--format", "csv"};
  CHECK(invoke(csv).out == invoke(csv).out);
}

TEST_CASE("scan writes a CSV table and an annotated SVG") {
  const auto path = temp("circext_scan_test.svg");
  const auto o = invoke({"scan", "--lo", "0.09", "--hi", "0.12", "--points", "4", "--grid-s", "60", "--grid-alpha",
                         "120", "--plot", path.string(), "--format", "csv"});
  REQUIRE(o.code == 0);
  CHECK(o.out.rfind("eps,lhs,rhs\n", 0) == 0);
  const std::string svg = slurp(path);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("crossing eps = 0.10") != std::string::npos);
  std::filesystem::remove(path);
  const auto direct = invoke({"scan", "--lo", "0.05", "--points", "1", "--grid-s", "20", "--grid-alpha", "36", "--format", "svg"});
  CHECK(direct.code == 0);
  CHECK(direct.out.find("</svg>") != std::string::npos);
}

TEST_CASE("render_svg edge cases") {
  threshold::ThresholdCurve one{{0.05}, {36.0}, {28.0}};
  const auto svg = plot::render_svg(one);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("crossing") == std::string::npos);
  CHECK_THROWS_AS(plot::render_svg({}), DomainError);
  threshold::ThresholdCurve ragged{{0.05, 0.06}, {36.0}, {28.0, 28.0}};
  CHECK_THROWS_AS(plot::render_svg(ragged), DomainError);
  CHECK_THROWS_AS(plot::emit_plot(one, "/nonexistent-dir/p.svg"), IoError);
}

TEST_CASE("spectrum command: matrix, scaling, concentration and cache file") {
  const auto cache = temp("circext_cli_cache.txt");
  std::filesystem::remove(cache);
  const auto m = invoke({"spectrum", "--N", "8", "--eigenvalues", "3", "--cache", cache.string()});
  REQUIRE(m.code == 0);
  const auto j = result_of(m);
  CHECK(j["result"]["dimension"] == 61);
  CHECK(j["result"]["eigenvalues"].size() == 3);
  CHECK(j["result"]["positive_semidefinite"] == true);
  CHECK(j["result"]["constant_mode_in_kernel"] == true);
  CHECK(std::filesystem::file_size(cache) > 0);
  const auto again = invoke({"spectrum", "--N", "8", "--eigenvalues", "3", "--cache", cache.string()});
  CHECK(result_of(again)["result"] == j["result"]);
  std::filesystem::remove(cache);

  const auto s = invoke({"spectrum", "--study", "scaling", "--N-list", "4,8"});
  CHECK(s.code == 0);
  CHECK(result_of(s)["result"]["rows"].size() == 2);
  const auto c = invoke({"spectrum", "--study", "concentration", "--N", "8", "--format", "csv"});
  CHECK(c.code == 0);
  CHECK(c.out.rfind("distance_bin,cone_bin,mass\n", 0) == 0);
}

TEST_CASE("report command combines threshold, certificates and spectrum") {
  const auto o = invoke({"report", "--grid-s", "60", "--grid-alpha", "120", "--N", "8"});
  CHECK(o.code == 0);
  const auto j = result_of(o);
  CHECK(j["result"]["threshold"]["max_epsilon"].get<double>() == doctest::Approx(0.104).epsilon(0.05));
  CHECK(j["result"]["threshold"]["margin_at_1_20"].get<double>() > 0.0);
  CHECK(j["result"]["certifications"].size() == 8);
  CHECK(j["result"]["spectrum"]["rows"].size() == 2);
}

TEST_CASE("help exits 0") {
  const auto o = invoke({"--help"});
  CHECK(o.code == 0);
  CHECK(o.out.find("usage:") != std::string::npos);
}

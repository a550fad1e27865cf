#include "conik/serialize.hpp"

#include "support/helpers.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace conik;
using namespace conik::testing;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CONIK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/conik_test_") + name;
}

}  // namespace

TEST_SUITE_BEGIN("serialize");

TEST_CASE("doubles are written with 17 significant digits") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("cone serialization round trips") {
  for (const auto& cone : cone_catalog()) {
    const std::string text = cone_to_json(*cone);
    ConePtr back = cone_from_json(text);
    CHECK(back->dim() == cone->dim());
    CHECK(back->theta() == cone->theta());
    CHECK(back->kind() == cone->kind());
    CHECK(cone_to_json(*back) == text);
  }
}

TEST_CASE("program serialization round trips byte-identically") {
  ConicProgram prog = gen_feasible_instance(make_exp(2), 3, 77);
  const std::string text = program_to_json(prog);
  ConicProgram back = program_from_json(text);
  CHECK((back.A - prog.A).norm() == 0.0);
  CHECK((back.b - prog.b).norm() == 0.0);
  CHECK((back.c - prog.c).norm() == 0.0);
  CHECK((back.x0 - prog.x0).norm() == 0.0);
  CHECK(back.cone->spec_string() == prog.cone->spec_string());
  CHECK(program_to_json(back) == text);
}

TEST_CASE("bundled LP fixture parses and solves to its analytic optimum") {
  ConicProgram prog = program_from_file(std::string(CONIK_FIXTURE_DIR) + "/lp_small.json");
  IpmResult res = solve(prog, ScalingKind::nt, 1e-9);
  REQUIRE(res.status == SolveStatus::optimal);
  CHECK(prog.c.dot(res.x) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("cli xi-scan is deterministic and respects bounds") {
  const std::string out1 = temp_path("scan1.json"), out2 = temp_path("scan2.json");
  REQUIRE(run_cli("xi-scan --cone orthant:3 --samples 60 --seed 7 --out " + out1) == 0);
  REQUIRE(run_cli("xi-scan --cone orthant:3 --samples 60 --seed 7 --out " + out2) == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(slurp(out1).find("\"schema\":\"conik/v1\"") != std::string::npos);

  // csv variant
  const std::string csv = temp_path("scan.csv");
  REQUIRE(run_cli("xi-scan --cone soc:3 --samples 40 --seed 3 --format csv --out " + csv) == 0);
  CHECK(slurp(csv).rfind("xi_check,", 0) == 0);
}

TEST_CASE("cli usage errors exit with code 2") {
  CHECK(run_cli("xi-scan --samples 5 --out /tmp/x.json") == 2);        // missing --cone
  CHECK(run_cli("xi-scan --cone mystery:3 --out /tmp/x.json") == 2);   // bad kind
  CHECK(run_cli("nonsense") == 2);
}

TEST_CASE("cli solve pipeline") {
  const std::string inst = temp_path("exp_inst.json");
  {
    ConicProgram prog = gen_feasible_instance(make_exp(2), 3, 5);
    std::ofstream out(inst, std::ios::binary);
    out << program_to_json(prog) << '\n';
  }
  // nt on an exp instance is a documented contract error
  CHECK(run_cli("solve --instance " + inst + " --scaling nt") == 2);

  const std::string sol = temp_path("exp_sol.json");
  const std::string trace = temp_path("exp_trace.jsonl");
  REQUIRE(run_cli("solve --instance " + inst + " --scaling integral --eps 1e-8 --out " + sol +
                  " --trace " + trace) == 0);
  CHECK(slurp(sol).find("\"status\":\"optimal\"") != std::string::npos);
  // one JSON record per iteration
  std::istringstream lines(slurp(trace));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    if (!line.empty()) {
      ++count;
      CHECK(line.front() == '{');
      CHECK(line.find("\"mu\":") != std::string::npos);
    }
  }
  CHECK(count >= 2);
}

TEST_CASE("cli report tables") {
  const std::string rho = temp_path("rho.csv");
  REQUIRE(run_cli("report --table rho --format csv --out " + rho) == 0);
  const std::string text = slurp(rho);
  CHECK(text.rfind("n,tau,rho", 0) == 0);
  CHECK(text.find("\n2,1.4142135623730951,1.2071067811865475\n") != std::string::npos);
}

TEST_SUITE_END();

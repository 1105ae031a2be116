// Drives the installed CLI binary end to end: exit codes, output files, flags.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "hypsr/io.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args, bool want_stderr = false) {
  const std::string cmd = std::string(HYPSR_CLI_PATH) + " " + args +
                          (want_stderr ? " 2>&1 >/dev/null" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hypsr_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("generate writes the base-case table") {
  const auto path = scratch("base.csv");
  const auto res = run("generate --sig 1,1 --radius 1 --mode closed_form --psi-start 0 --psi-end 1 "
                       "--steps 10 --format csv --out " + path.string());
  REQUIRE(res.exit_code == 0);
  std::stringstream ss(slurp(path));
  std::string line;
  std::getline(ss, line);
  CHECK(line == "psi,t_1,x_2,dt_1,dx_2,form_residual,ortho_residual");
  std::getline(ss, line);
  CHECK(line == "0,0,1,1,0,0,0");
  int rows = 1;
  while (std::getline(ss, line)) ++rows;
  CHECK(rows == 11);
}

TEST_CASE("generate: integrated and closed-form outputs agree") {
  const auto closed = scratch("closed.json");
  const auto numeric = scratch("numeric.json");
  const std::string common = "generate --sig 2,3 --radius 1.5 --psi-start 0 --psi-end 1.5 --steps 2000 "
                             "--format json --out ";
  REQUIRE(run(common + closed.string() + " --mode closed_form").exit_code == 0);
  REQUIRE(run(common + numeric.string() + " --mode integrated").exit_code == 0);
  std::ifstream a(closed), b(numeric);
  const auto ta = hypsr::io::read_trajectory_json(a);
  const auto tb = hypsr::io::read_trajectory_json(b);
  CHECK(ta.provenance == hypsr::Provenance::closed_form);
  CHECK(tb.provenance == hypsr::Provenance::integrated);
  const double bound =
      1e-7 * (1 + 3 * ta.spec.effective_radius() * std::cosh(1.5 * ta.spec.frequency()));
  CHECK(hypsr::max_deviation(ta, tb) <= bound);
}

TEST_CASE("generate writes to stdout by default") {
  const auto res = run("generate --sig 1,2 --psi-start -1 --psi-end 1 --steps 4");
  CHECK(res.exit_code == 0);
  std::stringstream ss(res.out);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "psi,t_1,x_2,x_3,dt_1,dx_2,dx_3,form_residual,ortho_residual");
}

TEST_CASE("generate warns on stderr when residuals exceed --tol") {
  const auto clean = run("generate --sig 4,4", true);
  CHECK(clean.exit_code == 0);
  CHECK(clean.out.empty());
  const auto coarse = run("generate --sig 2,2 --mode integrated --steps 20", true);
  CHECK(coarse.exit_code == 0);
  CHECK(coarse.out.find("warning:") != std::string::npos);
}

TEST_CASE("generate configuration errors exit 1") {
  CHECK(run("generate --steps 0").exit_code == 1);
  CHECK(run("generate --sig 0,2").exit_code == 1);
  CHECK(run("generate --sig 2").exit_code == 1);
  CHECK(run("generate --sig a,b").exit_code == 1);
  CHECK(run("generate --radius -1").exit_code == 1);
  CHECK(run("generate --tol 0").exit_code == 1);
  CHECK(run("generate --mode euler").exit_code == 1);
  CHECK(run("generate --format xml").exit_code == 1);
  CHECK(run("generate --no-such-flag").exit_code == 1);
  CHECK(run("").exit_code == 1);
}

TEST_CASE("unwritable output exits 2") {
  CHECK(run("generate --out /nonexistent-dir/x/out.csv").exit_code == 2);
  CHECK(run("verify --max-sig 1 --samples 5 --steps 10 --out /nonexistent-dir/x/report.txt")
            .exit_code == 2);
}

TEST_CASE("verify passes on defaults and fails on the injected fault") {
  const auto ok = run("verify");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("16/16 cells passed") != std::string::npos);

  const auto path = scratch("fault.json");
  const auto bad = run("verify --inject-fault --format json --out " + path.string());
  CHECK(bad.exit_code == 3);
  const auto doc = nlohmann::json::parse(slurp(path));
  CHECK(doc["passed"] == false);
  REQUIRE(doc["cells"].size() == 16);
  for (const auto& cell : doc["cells"]) {
    const int r = cell["r"];
    CHECK(cell["passed"] == (r == 1));
  }
}

TEST_CASE("verify rejects a zero tolerance") {
  CHECK(run("verify --tol 0").exit_code == 1);
  CHECK(run("verify --max-sig 0").exit_code == 1);
  CHECK(run("verify --format csv").exit_code == 1);
}

TEST_CASE("verify honours the radius list") {
  const auto res = run("verify --max-sig 2 --radius 0.5,2 --samples 9 --steps 100");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("8/8 cells passed") != std::string::npos);
}

TEST_CASE("dims") {
  auto res = run("dims 4 1");
  CHECK(res.exit_code == 0);
  CHECK(res.out == "8\n");
  CHECK(run("dims 4 2").out == "16\n");
  CHECK(run("dims 5 3").out == "40\n");
  CHECK(run("dims 0 3").exit_code == 1);
  CHECK(run("dims 3 -1").exit_code == 1);
  CHECK(run("dims 3 80").exit_code == 1);
}

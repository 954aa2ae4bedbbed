#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace {

std::string cli_path() {
  const char* p = std::getenv("DOF_ATLAS_CLI");
  REQUIRE(p != nullptr);
  return p;
}

struct RunResult {
  int exit_code;
  std::string out;
};

// Runs the installed binary with stdout+stderr captured to a scratch file.
RunResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const std::string capture =
      "/tmp/dofatlas_cli_capture_" + std::to_string(counter++) + ".txt";
  const std::string cmd =
      env + (env.empty() ? "" : " ") + "\"" + cli_path() + "\" " + args +
      " > " + capture + " 2>&1";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(capture.c_str());
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("region command reports corners and verdict") {
  const std::string out = "/tmp/dofatlas_cli_region.json";
  const RunResult r = run_cli(
      "region --channel bc --antennas 4,2,3 --alpha 0.9,0.6 --out " + out);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("regime: BC_PhiNonPos") != std::string::npos);
  CHECK(r.out.find("verdict: Yes") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["achievable"]["vertices"].size() == 5);
  CHECK(j.contains("outer"));
  CHECK(j.contains("verdict"));
  std::remove(out.c_str());
}

TEST_CASE("region csv output") {
  const std::string out = "/tmp/dofatlas_cli_region.csv";
  const RunResult r = run_cli(
      "region --channel ic --antennas 4,3,2,3 --alpha 0.5,0.5 --out " + out);
  REQUIRE(r.exit_code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.find("achievable,") != std::string::npos);
  CHECK(csv.find("outer,") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("alloc on the narrow pair needs lambda") {
  const RunResult bad =
      run_cli("alloc --channel ic --antennas 2,4,1,3 --alpha 0.4,0.4");
  CHECK(bad.exit_code == 2);
  const RunResult ok = run_cli(
      "alloc --channel ic --antennas 2,4,1,3 --alpha 0.4,0.4 --lambda 0.6");
  REQUIRE(ok.exit_code == 0);
  CHECK(ok.out.find("branch D") != std::string::npos);
}

TEST_CASE("verify certifies the closed forms") {
  const RunResult r = run_cli(
      "verify --channel bc --antennas 4,2,3 --alpha 0.45,0.3 "
      "--grid-step 0.005");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("sum: closed") != std::string::npos);
}

TEST_CASE("argument errors") {
  CHECK(run_cli("region --channel bc --antennas 4,2,3 --alpha 0.5,0.5 "
                "--frobnicate")
            .exit_code == 64);
  CHECK(run_cli("region --channel bc --antennas 4,2 --alpha 0.5,0.5")
            .exit_code == 2);
  CHECK(run_cli("region --channel bc --antennas 0,2,3 --alpha 0.5,0.5")
            .exit_code == 2);
  CHECK(run_cli("region --channel bogus --antennas 4,2,3 --alpha 0.5,0.5")
            .exit_code != 0);
}

TEST_CASE("simulate runs are reproducible") {
  const std::string o1 = "/tmp/dofatlas_cli_sim1.csv";
  const std::string o2 = "/tmp/dofatlas_cli_sim2.csv";
  const std::string args =
      "simulate --channel bc --antennas 4,2,3 --alpha 0.9,0.6 "
      "--snr-db 30:50:10 --trials 10 --seed 5 --out ";
  REQUIRE(run_cli(args + o1).exit_code == 0);
  REQUIRE(run_cli(args + o2).exit_code == 0);
  const std::string c1 = slurp(o1), c2 = slurp(o2);
  CHECK(!c1.empty());
  CHECK(c1 == c2);
  CHECK(c1.find("P_db,message_id,mean_rate_bits,stderr") == 0);
  std::remove(o1.c_str());
  std::remove(o2.c_str());
}

TEST_CASE("residual sweep command") {
  const RunResult r = run_cli(
      "sweep-residual --alpha 0.5 --snr-db 30:50:10 --trials 40 --seed 3");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("residual slope") != std::string::npos);
}

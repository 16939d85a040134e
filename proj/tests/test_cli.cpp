#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

// End-to-end tests of the command-line tool.  The binary path arrives via the
// CHANENT_CLI environment variable, set by the build system.

namespace {

using nlohmann::json;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const char* exe = std::getenv("CHANENT_CLI");
  REQUIRE_MESSAGE(exe != nullptr, "CHANENT_CLI is not set");
  const std::string cmd = std::string(exe) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

int count_lines_starting(const std::string& text, const std::string& prefix) {
  int count = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    if (text.compare(pos, prefix.size(), prefix) == 0) ++count;
    pos = end + 1;
  }
  return count;
}

constexpr double kLog2 = 0.69314718055994531;

}  // namespace

TEST_CASE("entropy: depolarizing qubit JSON output") {
  const RunResult r =
      run("entropy --named depolarizing --params '{\"d\":2}'");
  REQUIRE(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out["command"] == "entropy");
  CHECK(std::abs(out["h_map"].get<double>() - 2.0 * kLog2) < 1e-12);
  CHECK(std::abs(out["h_channel"].get<double>() - kLog2) < 1e-9);
  CHECK(std::abs(out["gap"].get<double>()) < 1e-9);
  CHECK(out["optimizer"]["converged"].get<bool>());
  CHECK(out["optimizer"]["argmax_lambda"].size() == 2);
}

TEST_CASE("entropy: --log-base 2 rescales the report") {
  const RunResult r =
      run("entropy --named depolarizing --params '{\"d\":2}' --log-base 2");
  REQUIRE(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(std::abs(out["h_map"].get<double>() - 2.0) < 1e-12);
  CHECK(out["log_base"] == "2");
}

TEST_CASE("entropy: byte-identical output across runs") {
  const std::string args =
      "entropy --named random --params '{\"d\":2,\"k\":4}' --seed 42";
  const RunResult a = run(args);
  const RunResult b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("entropy: --out writes the report to a file") {
  std::remove("cli_entropy_out.json");
  const RunResult r = run(
      "entropy --named identity --params '{\"d\":2}' --out cli_entropy_out.json");
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in("cli_entropy_out.json");
  REQUIRE(in.good());
  const json out = json::parse(in);
  CHECK(std::abs(out["h_map"].get<double>()) < 1e-12);
}

TEST_CASE("entropy: exit codes for bad input") {
  CHECK(run("entropy").code == 2);  // no channel
  CHECK(run("entropy --channel '{broken'").code == 2);
  CHECK(run("entropy --channel missing_file.json").code == 2);
  CHECK(run("entropy --named no_such_channel --params '{}'").code == 2);
  CHECK(run("entropy --named depolarizing --params '{\"d\":2}' "
            "--channel '{\"kind\":\"named\"}'")
            .code == 2);
  CHECK(run("entropy --named depolarizing --params '{\"d\":2}' --log-base 3")
            .code == 2);
  // Valid JSON, invalid map: not trace preserving.
  CHECK(run("entropy --channel '{\"kind\":\"kraus\",\"dim_in\":2,\"dim_out\":2,"
            "\"ops\":[[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]]}'")
            .code == 3);
}

TEST_CASE("verify-unital: passes on a Pauli mixture") {
  const RunResult r = run(
      "verify-unital --named pauli_mixture --params '{\"q\":[0.4,0.3,0.2,0.1]}'");
  REQUIRE(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out["all_pass"].get<bool>());
  CHECK(out["checks"]["symmetry"]["pass"].get<bool>());
  CHECK(out["checks"]["concavity"]["pass"].get<bool>());
  CHECK(std::abs(out["checks"]["maximum"]["p_star"].get<double>() - 0.5) < 1e-6);
  CHECK(out["checks"]["saturation"]["pass"].get<bool>());
}

TEST_CASE("verify-unital: precondition failures exit 4") {
  CHECK(run("verify-unital --named amplitude_damping --params '{\"gamma\":0.3}'")
            .code == 4);
  CHECK(run("verify-unital --named depolarizing --params '{\"d\":3}'").code == 4);
}

TEST_CASE("fig1: row layout and determinism") {
  const std::string args = "fig1 --d-list 2 --trials 2 --nu uniform,dir_d_1";
  const RunResult a = run(args);
  REQUIRE(a.code == 0);
  CHECK(count_lines_starting(a.out, "fig1,2,uniform,aggregate,2,") == 1);
  CHECK(count_lines_starting(a.out, "fig1,2,dir_d_1,aggregate,2,") == 1);
  CHECK(count_lines_starting(a.out, "fig1,") == 2);
  CHECK(count_lines_starting(a.out, "# ") == 4);
  CHECK(count_lines_starting(a.out, "experiment,d,nu_kind,") == 1);

  const RunResult b = run(args);
  CHECK(a.out == b.out);
}

TEST_CASE("fig1: bad nu kind and bad d-list exit 2") {
  CHECK(run("fig1 --d-list 2 --trials 2 --nu bogus").code == 2);
  CHECK(run("fig1 --d-list 4,2 --trials 2").code == 2);
  CHECK(run("fig1 --d-list x --trials 2").code == 2);
}

TEST_CASE("conjecture: emits one row per dimension") {
  const RunResult r = run("conjecture --d-list 2,4 --trials 2");
  REQUIRE(r.code == 0);
  CHECK(count_lines_starting(r.out, "conjecture,2,max_entangled,") == 1);
  CHECK(count_lines_starting(r.out, "conjecture,4,max_entangled,") == 1);
}

TEST_CASE("spectrum: one row per eigenvalue per trial") {
  const RunResult r = run("spectrum --d 2 --trials 2 --nu uniform");
  REQUIRE(r.code == 0);
  CHECK(count_lines_starting(r.out, "spectrum,2,uniform,0,") == 4);
  CHECK(count_lines_starting(r.out, "spectrum,2,uniform,1,") == 4);
  CHECK(r.out.find("identity_dev_max=") != std::string::npos);
}

TEST_CASE("free-moments: single aggregate row with unit first moment") {
  const RunResult r = run("free-moments --d 4 --trials 3");
  REQUIRE(r.code == 0);
  const std::string prefix = "free_moments,4,dir_d_1,aggregate,16,3,";
  REQUIRE(count_lines_starting(r.out, prefix) == 1);
  CHECK(r.out.find("# rescaling=mean_one") != std::string::npos);

  const std::size_t at = r.out.find(prefix) + prefix.size();
  const double m1 = std::strtod(r.out.c_str() + at, nullptr);
  CHECK(std::abs(m1 - 1.0) < 1e-12);
}

TEST_CASE("random-channel: emits channel JSON that round-trips") {
  const RunResult r = run("random-channel --d 2 --k 4 --seed 9");
  REQUIRE(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out["kind"] == "kraus");
  CHECK(out["dim_in"] == 2);
  CHECK(out["ops"].size() == 4);
  CHECK(out["meta"]["seed"] == 9);

  std::ofstream file("cli_roundtrip_channel.json");
  file << r.out;
  file.close();
  const RunResult back = run("entropy --channel cli_roundtrip_channel.json");
  CHECK(back.code == 0);
  const json rep = json::parse(back.out);
  CHECK(rep["gap"].get<double>() > -1e-9);
}

TEST_CASE("random-channel: missing --d exits 2") {
  CHECK(run("random-channel").code == 2);
}

TEST_CASE("top-level: help exits 0, unknown subcommand exits 2") {
  CHECK(run("--help").code == 0);
  CHECK(run("bogus-subcommand").code == 2);
  CHECK(run("").code == 2);  // a subcommand is required
}

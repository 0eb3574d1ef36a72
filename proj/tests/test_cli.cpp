// End-to-end checks of the command-line tool: exit codes, artifact layout,
// determinism across reruns, and config-file precedence. The binary path is
// injected at build time.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#include <json.hpp>

#ifndef PDESEL_CLI_PATH
#error "PDESEL_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;

int exit_code(int system_status) {
#ifdef _WIN32
  return system_status;
#else
  if (system_status == -1) return -1;
  return WIFEXITED(system_status) ? WEXITSTATUS(system_status) : -1;
#endif
}

// Runs the tool with stdout/stderr captured into scratch files.
struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunResult run(const std::string& args, const fs::path& scratch) {
  fs::create_directories(scratch);
  const fs::path out = scratch / "stdout.txt";
  const fs::path err = scratch / "stderr.txt";
  const std::string command =
      std::string(PDESEL_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
  RunResult result;
  result.code = exit_code(std::system(command.c_str()));
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

// A scratch directory per test case, wiped up-front so reruns start clean.
fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::path("cli_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Small enough to keep the whole binary-driving suite below a few seconds.
const std::string kSmallSim = "--nx 64 --nt 50 --t-max 2";
const std::string kSmallDiscover =
    "--nx 64 --nt 50 --t-max 2 --samples 500 --max-size 3 --n-boot 20";

}  // namespace

TEST_CASE("cli: usage errors exit with code 2") {
  const fs::path dir = scratch_dir("usage");
  CHECK(run("simulate --nu -1 --out " + (dir / "o").string(), dir).code == 2);
  CHECK(run("no-such-command", dir).code == 2);
  CHECK(run("simulate --no-such-flag", dir).code == 2);
  CHECK(run("discover --an nonsense --out " + (dir / "o").string(), dir).code == 2);
}

TEST_CASE("cli: help exits cleanly") {
  const fs::path dir = scratch_dir("help");
  const RunResult help = run("--help", dir);
  CHECK(help.code == 0);
  CHECK(help.out.find("discover") != std::string::npos);
}

TEST_CASE("cli: missing inputs exit with code 1 and name the path") {
  const fs::path dir = scratch_dir("missing");
  const std::string absent = (dir / "absent.csv").string();
  const RunResult result =
      run("build-library --field " + absent + " --out " + (dir / "o").string(), dir);
  CHECK(result.code == 1);
  CHECK(result.err.find(absent) != std::string::npos);
}

TEST_CASE("cli: simulate writes the field with its sidecar") {
  const fs::path dir = scratch_dir("simulate");
  const fs::path out = dir / "run";
  const RunResult result =
      run("--out " + out.string() + " simulate " + kSmallSim + " --nu 0.2", dir);
  REQUIRE(result.code == 0);
  CHECK(fs::exists(out / "field.csv"));
  CHECK(fs::exists(out / "field_meta.json"));

  const auto meta = nlohmann::json::parse(slurp(out / "field_meta.json"));
  CHECK(meta["n_x"] == 64);
  CHECK(meta["n_t"] == 50);
  CHECK(meta["nu"] == 0.2);
  CHECK(meta["seed"] == 0);
}

TEST_CASE("cli: simulate is deterministic across reruns") {
  const fs::path dir = scratch_dir("determinism_sim");
  REQUIRE(run("--out " + (dir / "a").string() + " simulate " + kSmallSim, dir).code == 0);
  REQUIRE(run("--out " + (dir / "b").string() + " simulate " + kSmallSim, dir).code == 0);
  CHECK(slurp(dir / "a" / "field.csv") == slurp(dir / "b" / "field.csv"));
  CHECK(slurp(dir / "a" / "field_meta.json") == slurp(dir / "b" / "field_meta.json"));
}

TEST_CASE("cli: discover emits identical artifacts for identical config and seed") {
  const fs::path dir = scratch_dir("determinism_disc");
  REQUIRE(run("--out " + (dir / "a").string() + " discover " + kSmallDiscover, dir).code == 0);
  REQUIRE(run("--out " + (dir / "b").string() + " discover " + kSmallDiscover, dir).code == 0);

  for (const std::string name : {"sweep.json", "fig1.csv", "fig2.csv"}) {
    const std::string first = slurp(dir / "a" / name);
    CHECK_FALSE(first.empty());
    CHECK(first == slurp(dir / "b" / name));
  }

  // A different seed changes the sampled library and thus the artifacts.
  REQUIRE(run("--seed 1 --out " + (dir / "c").string() + " discover " + kSmallDiscover, dir)
              .code == 0);
  CHECK(slurp(dir / "a" / "sweep.json") != slurp(dir / "c" / "sweep.json"));
}

TEST_CASE("cli: discover prints one selection line per criterion") {
  const fs::path dir = scratch_dir("discover_output");
  const RunResult result =
      run("--out " + (dir / "o").string() + " discover " + kSmallDiscover, dir);
  REQUIRE(result.code == 0);
  CHECK(result.out.find("BIC selection") != std::string::npos);
  CHECK(result.out.find("UBIC selection") != std::string::npos);
  CHECK(result.out.find("ICOMP[a_n=1] selection") != std::string::npos);
  CHECK(result.out.find("ICOMP[a_n=log_n] selection") != std::string::npos);
  CHECK(result.out.find("u_t = ") != std::string::npos);
}

TEST_CASE("cli: build-library round trips into discover") {
  const fs::path dir = scratch_dir("pipeline");
  const fs::path sim = dir / "sim";
  const fs::path built = dir / "lib";
  const fs::path scored = dir / "disc";

  REQUIRE(run("--out " + sim.string() + " simulate " + kSmallSim, dir).code == 0);
  REQUIRE(run("--out " + built.string() + " build-library --field " +
                  (sim / "field.csv").string() + " --samples 500",
              dir)
              .code == 0);
  REQUIRE(fs::exists(built / "library.csv"));

  const RunResult scored_run = run("--out " + scored.string() + " discover --library " +
                                       (built / "library.csv").string() +
                                       " --max-size 3 --n-boot 20",
                                   dir);
  REQUIRE(scored_run.code == 0);
  CHECK(fs::exists(scored / "sweep.json"));
}

TEST_CASE("cli: config files fill defaults but flags win") {
  const fs::path dir = scratch_dir("config");
  const fs::path cfg = dir / "config.json";
  {
    std::ofstream out(cfg);
    out << "{\"nu\": 0.2, \"n_x\": 64, \"n_t\": 50, \"t_max\": 2}\n";
  }

  const fs::path from_file = dir / "file";
  REQUIRE(run("--config " + cfg.string() + " --out " + from_file.string() + " simulate", dir)
              .code == 0);
  CHECK(nlohmann::json::parse(slurp(from_file / "field_meta.json"))["nu"] == 0.2);

  const fs::path overridden = dir / "flag";
  REQUIRE(run("--config " + cfg.string() + " --out " + overridden.string() +
                  " simulate --nu 0.3",
              dir)
              .code == 0);
  CHECK(nlohmann::json::parse(slurp(overridden / "field_meta.json"))["nu"] == 0.3);

  const fs::path bad_cfg = dir / "bad.json";
  {
    std::ofstream out(bad_cfg);
    out << "{\"viscosity\": 0.2}\n";
  }
  CHECK(run("--config " + bad_cfg.string() + " --out " + (dir / "x").string() + " simulate", dir)
            .code == 2);
}

TEST_CASE("cli: verify-equivalence reports the battery outcome") {
  const fs::path dir = scratch_dir("equivalence");
  const RunResult pass =
      run("--json --out " + (dir / "a").string() + " verify-equivalence --instances 20", dir);
  REQUIRE(pass.code == 0);
  const auto report = nlohmann::json::parse(pass.out);
  CHECK(report["pass_count"] == 20);
  CHECK(report["fail_count"] == 0);
  CHECK(fs::exists(dir / "a" / "equivalence.json"));

  const RunResult broken = run("--json --out " + (dir / "b").string() +
                                   " verify-equivalence --instances 20 --perturb 1e-3",
                               dir);
  CHECK(broken.code == 1);
  CHECK(nlohmann::json::parse(broken.out)["fail_count"] == 20);
}

TEST_CASE("cli: scan-an writes the schedule report") {
  const fs::path dir = scratch_dir("scan");
  const fs::path out = dir / "o";
  const RunResult result =
      run("--out " + out.string() + " scan-an " + kSmallSim +
              " --samples 500 --max-size 3 --an 0.5 --an log_n --oracle u*u_x --oracle u_xx",
          dir);
  REQUIRE(result.code == 0);
  REQUIRE(fs::exists(out / "scan.json"));
  const auto doc = nlohmann::json::parse(slurp(out / "scan.json"));
  CHECK(doc["rows"].size() == 2);
}

TEST_CASE("cli: json mode prints machine-readable summaries") {
  const fs::path dir = scratch_dir("json_mode");
  const RunResult result =
      run("--json --out " + (dir / "o").string() + " simulate " + kSmallSim, dir);
  REQUIRE(result.code == 0);
  const auto doc = nlohmann::json::parse(result.out);
  CHECK(doc["n_x"] == 64);
}

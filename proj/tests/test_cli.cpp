#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "ymc/experiments.hpp"

using namespace ymc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(YMC_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ymc-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config text: keys, comments, tolerances") {
  ExperimentConfig cfg;
  std::istringstream in("# comment\n group = u1\nsteps=32  # trailing\n\nsamples=500\nseed=7\nworkers=2\n"
                        "hbar=1, 0.5\ntolerance.n_se=4\nout=/tmp/x\n");
  apply_config_text(cfg, in, "cfg");
  CHECK(cfg.group == "u1");
  CHECK(cfg.steps == 32);
  CHECK(cfg.samples == 500);
  CHECK(cfg.seed == 7);
  CHECK(cfg.workers == 2);
  CHECK(cfg.hbars == std::vector<double>{1.0, 0.5});
  CHECK(cfg.tol("n_se", 3.0) == 4.0);
  CHECK(cfg.tol("other", 0.25) == 0.25);
  CHECK(cfg.out_dir == "/tmp/x");
  const auto rec = cfg.record();
  CHECK(rec.at("tolerance.n_se") == "4");
  CHECK(rec.at("hbar") == "1,0.5");
}

TEST_CASE("config errors name the line and key") {
  auto error_of = [](const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    try {
      apply_config_text(cfg, in, "f.cfg");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(error_of("steps=10\nbogus=1\n") == "f.cfg:2: unknown key 'bogus'");
  CHECK(error_of("steps=ten\n").find("f.cfg:1: key 'steps'") == 0);
  CHECK(error_of("\n\nsamples=1\n").find("f.cfg:3: key 'samples'") == 0);
  CHECK(error_of("group=su3\n").find("f.cfg:1: key 'group'") == 0);
  CHECK(error_of("hbar=1,-2\n").find("f.cfg:1: key 'hbar'") == 0);
  CHECK(error_of("just words\n") == "f.cfg:1: expected key=value");
  CHECK(error_of("seed=12\n").empty());
}

TEST_CASE("csv rows use full precision and no timestamps") {
  ExperimentResult r{"x", {}, {}, 1.5};
  CheckRow row;
  row.experiment = "x";
  row.check = "c";
  row.group = "su2";
  row.value = cplx(0.1, -1.0 / 3.0);
  row.pass = true;
  r.rows.push_back(row);
  CHECK(csv_rows(r) == "x,c,su2,0,0,0,0,0.10000000000000001,-0.33333333333333331,0,0,0,0,0,pass\n");
  CHECK(r.pass());
  r.rows[0].pass = false;
  CHECK_FALSE(r.pass());
  CHECK_FALSE(ExperimentResult{}.pass());
}

TEST_CASE("registry covers every subcommand") {
  for (const char* name : {"heat-check", "bm-check", "bridge-check", "cm-flat", "cm-loop", "gauge-cov",
                           "ggv-unitarity", "reduce-verify", "gauge-inv", "resolution", "classical-limit",
                           "compact-oracle"})
    CHECK_NOTHROW(find_experiment(name));
  CHECK_THROWS(find_experiment("nope"));
}

TEST_CASE("cli: exit codes, outputs, precedence") {
  const fs::path dir = scratch("cli");
  CHECK(run_cli("compact-oracle --out " + dir.string()) == 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "compact-oracle.json"));
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["config"]["seed"] == "20240611");
  CHECK(doc["experiments"][0]["verdict"] == "pass");
  for (const auto& row : doc["experiments"][0]["rows"]) CHECK(row["value"][0].get<double>() <= 1e-8);
  CHECK(slurp(dir / "compact-oracle.csv").rfind(csv_header(), 0) == 0);

  // an impossible tolerance turns the verdict red: exit 2
  CHECK(run_cli("compact-oracle --tolerance oracle=1e-30 --out " + dir.string()) == 2);
  // configuration problems: exit 3
  const fs::path bad = dir / "bad.cfg";
  std::ofstream(bad) << "steps=8\nfoo=1\n";
  CHECK(run_cli("compact-oracle --config " + bad.string() + " --out " + dir.string()) == 3);
  CHECK(run_cli("compact-oracle --tolerance oops --out " + dir.string()) == 3);
  CHECK(run_cli("no-such-experiment") == 3);

  // CLI overrides the file, the file overrides defaults
  const fs::path good = dir / "good.cfg";
  std::ofstream(good) << "seed=5\nsamples=2000\nsteps=4\n";
  CHECK(run_cli("cm-flat --config " + good.string() + " --seed 9 --out " + dir.string()) == 0);
  const auto flat = nlohmann::json::parse(slurp(dir / "cm-flat.json"));
  CHECK(flat["config"]["seed"] == "9");
  CHECK(flat["config"]["samples"] == "2000");
  CHECK(flat["experiments"][0]["rows"][0]["M"] == 2000);
}

TEST_CASE("cli: reduce-verify on U(1) and byte-identical reruns") {
  const fs::path a = scratch("det-a"), b = scratch("det-b");
  const std::string args = "reduce-verify --group u1 --samples 4000 --workers 2 --seed 11 --out ";
  CHECK(run_cli(args + a.string()) == 0);
  CHECK(run_cli(args + b.string()) == 0);
  const std::string csv = slurp(a / "reduce-verify.csv");
  CHECK(csv == slurp(b / "reduce-verify.csv"));
  const auto doc = nlohmann::json::parse(slurp(a / "reduce-verify.json"));
  const auto& closed = doc["experiments"][0]["rows"][0];
  CHECK(closed["check"] == "gaussian_vs_theta_closed_forms");
  CHECK(closed["value"][0].get<double>() <= 1e-8);
  // a different worker count is a different (but equally valid) sample stream
  const fs::path c = scratch("det-c");
  CHECK(run_cli("reduce-verify --group u1 --samples 4000 --workers 1 --seed 11 --out " + c.string()) == 0);
  CHECK(slurp(c / "reduce-verify.csv") != csv);
}

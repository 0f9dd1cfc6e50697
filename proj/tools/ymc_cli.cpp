// ymc: run the named experiments and write JSON + CSV records.
//
// Exit codes: 0 all checks pass, 2 some check failed, 3 configuration or runtime error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "ymc/experiments.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Overrides {
  std::string group, out;
  int steps = 0, workers = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  bool have_seed = false;
  std::string config;
  std::vector<std::string> tolerances;
};

ymc::ExperimentConfig resolve(const Overrides& o) {
  ymc::ExperimentConfig cfg;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw ymc::ConfigError("cannot open config file '" + o.config + "'");
    ymc::apply_config_text(cfg, in, o.config);
  }
  if (!o.group.empty()) ymc::apply_setting(cfg, "group", o.group);
  if (o.steps) ymc::apply_setting(cfg, "steps", std::to_string(o.steps));
  if (o.samples) ymc::apply_setting(cfg, "samples", std::to_string(o.samples));
  if (o.have_seed) cfg.seed = o.seed;
  if (o.workers) ymc::apply_setting(cfg, "workers", std::to_string(o.workers));
  if (!o.out.empty()) cfg.out_dir = o.out;
  for (const auto& kv : o.tolerances) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ymc::ConfigError("--tolerance expects KEY=VALUE, got '" + kv + "'");
    ymc::apply_setting(cfg, "tolerance." + kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

json row_json(const ymc::CheckRow& r) {
  return {{"check", r.check},
          {"group", r.group},
          {"N", r.steps},
          {"M", r.samples},
          {"seed", r.seed},
          {"workers", r.workers},
          {"value", {r.value.real(), r.value.imag()}},
          {"se", r.se},
          {"closed", {r.closed.real(), r.closed.imag()}},
          {"ratio", {r.ratio.real(), r.ratio.imag()}},
          {"verdict", r.pass ? "pass" : "fail"}};
}

void write_outputs(const ymc::ExperimentConfig& cfg, const std::vector<ymc::ExperimentResult>& results,
                   const std::string& stem) {
  fs::create_directories(cfg.out_dir);
  json doc;
  doc["schema_version"] = 1;
  doc["config"] = cfg.record();
  doc["experiments"] = json::array();
  std::string csv = ymc::csv_header();
  for (const auto& r : results) {
    json e{{"id", r.id}, {"verdict", r.pass() ? "pass" : "fail"}, {"rows", json::array()}, {"notes", r.notes}};
    for (const auto& row : r.rows) e["rows"].push_back(row_json(row));
    doc["experiments"].push_back(e);
    csv += ymc::csv_rows(r);
  }
  std::ofstream(fs::path(cfg.out_dir) / (stem + ".json")) << doc.dump(2) << '\n';
  std::ofstream(fs::path(cfg.out_dir) / (stem + ".csv")) << csv;
}

void print_result(const ymc::ExperimentResult& r) {
  std::cout << r.id << ": " << (r.pass() ? "PASS" : "FAIL") << " (" << r.rows.size() << " checks, " << r.seconds
            << " s)\n";
  for (const auto& row : r.rows)
    if (!row.pass) std::cout << "  failed: " << row.check << " [" << row.group << "] value " << row.value << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ymc: Monte Carlo checks for Yang-Mills on a spacetime cylinder"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--group", o.group, "su2 or u1 (default: every group the experiment supports)")
      ->check(CLI::IsMember({"su2", "u1"}));
  app.add_option("--steps", o.steps, "time slices N")->check(CLI::PositiveNumber);
  app.add_option("--samples", o.samples, "Monte Carlo samples M")->check(CLI::PositiveNumber);
  app.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { o.seed = s, o.have_seed = true; },
                                         "base seed");
  app.add_option("--workers", o.workers, "worker threads (results depend on this)")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "output directory");
  app.add_option("--config", o.config, "key=value config file")->check(CLI::ExistingFile);
  app.add_option("--tolerance", o.tolerances, "override a tolerance, KEY=VALUE (repeatable)");

  std::vector<std::string> chosen;
  for (const auto& e : ymc::experiment_registry()) {
    app.add_subcommand(e.name, e.summary)->callback([&chosen, name = e.name] { chosen = {name}; });
  }
  app.add_subcommand("all", "run every experiment; failures do not stop the run")->callback([&chosen] {
    chosen.clear();
    for (const auto& e : ymc::experiment_registry()) chosen.push_back(e.name);
  });
  app.add_subcommand("list", "list experiments")->callback([&chosen] { chosen = {"list"}; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  if (chosen == std::vector<std::string>{"list"}) {
    for (const auto& e : ymc::experiment_registry())
      std::cout << std::left << std::setw(17) << e.name << (e.monte_carlo ? "[mc]  " : "      ") << e.summary << '\n';
    return 0;
  }

  ymc::ExperimentConfig cfg;
  try {
    cfg = resolve(o);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  }

  std::vector<ymc::ExperimentResult> results;
  bool error = false;
  for (const auto& name : chosen) {
    try {
      results.push_back(ymc::run_experiment(name, cfg));
      print_result(results.back());
    } catch (const std::exception& e) {
      std::cerr << name << ": error: " << e.what() << '\n';
      error = true;
    }
  }
  try {
    write_outputs(cfg, results, chosen.size() == 1 ? chosen.front() : "all");
  } catch (const std::exception& e) {
    std::cerr << "cannot write outputs: " << e.what() << '\n';
    return 3;
  }
  if (error) return 3;
  for (const auto& r : results)
    if (!r.pass()) return 2;
  return 0;
}

#pragma once

// Named experiments shared by the command-line runner and the acceptance suite.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ymc/group.hpp"

namespace ymc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string group;  // empty: the experiment's default
  int steps = 0;      // 0: the experiment's default
  long samples = 0;   // 0: the experiment's default
  std::uint64_t seed = 20240611;
  int workers = 1;
  std::vector<double> hbars{1.0, 0.5, 0.25, 0.1};
  std::map<std::string, double> tolerances;
  std::string out_dir = "ymc-out";

  // Merged settings in the key=value form, for output records.
  std::map<std::string, std::string> record() const;
  double tol(const std::string& key, double fallback) const;
  int steps_or(int fallback) const { return steps > 0 ? steps : fallback; }
  long samples_or(long fallback) const { return samples > 0 ? samples : fallback; }
  bool wants(const std::string& g) const { return group.empty() || group == g; }
};

// key=value lines; '#' starts a comment. Keys: group, steps, samples, seed,
// workers, hbar (comma list), out, tolerance.<name>. Errors name the line.
void apply_config_text(ExperimentConfig& cfg, std::istream& in, const std::string& source);
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct CheckRow {
  std::string experiment, check, group;
  int steps = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  cplx value;
  double se = 0.0;
  cplx closed;
  cplx ratio;
  bool pass = false;
};

struct ExperimentResult {
  std::string id;
  std::vector<CheckRow> rows;
  std::vector<std::string> notes;
  double seconds = 0.0;
  bool pass() const;
};

struct ExperimentInfo {
  std::string name;
  std::string summary;
  bool monte_carlo;
  std::function<ExperimentResult(const ExperimentConfig&)> run;
};

const std::vector<ExperimentInfo>& experiment_registry();
const ExperimentInfo& find_experiment(const std::string& name);
ExperimentResult run_experiment(const std::string& name, const ExperimentConfig& cfg);

std::string csv_header();
std::string csv_rows(const ExperimentResult& r);

}  // namespace ymc

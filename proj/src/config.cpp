#include <charconv>
#include <cstdio>
#include <istream>
#include <sstream>

#include "ymc/experiments.hpp"

namespace ymc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end)
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "group") {
    if (value != "su2" && value != "u1" && !value.empty())
      throw ConfigError("key 'group': expected su2 or u1, got '" + value + "'");
    cfg.group = value;
  } else if (key == "steps") {
    cfg.steps = parse_number<int>(key, value);
    if (cfg.steps < 2) throw ConfigError("key 'steps': need at least 2");
  } else if (key == "samples") {
    cfg.samples = parse_number<long>(key, value);
    if (cfg.samples < 2) throw ConfigError("key 'samples': need at least 2");
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "workers") {
    cfg.workers = parse_number<int>(key, value);
    if (cfg.workers < 1) throw ConfigError("key 'workers': need at least 1");
  } else if (key == "hbar") {
    std::vector<double> hs;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const double h = parse_number<double>(key, trim(item));
      if (!(h > 0)) throw ConfigError("key 'hbar': values must be positive");
      hs.push_back(h);
    }
    if (hs.empty()) throw ConfigError("key 'hbar': empty list");
    cfg.hbars = hs;
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key.rfind("tolerance.", 0) == 0 && key.size() > 10) {
    cfg.tolerances[key.substr(10)] = parse_number<double>(key, value);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

void apply_config_text(ExperimentConfig& cfg, std::istream& in, const std::string& source) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    try {
      if (eq == std::string::npos) throw ConfigError("expected key=value");
      apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::map<std::string, std::string> ExperimentConfig::record() const {
  std::map<std::string, std::string> r;
  r["group"] = group.empty() ? "default" : group;
  r["steps"] = steps > 0 ? std::to_string(steps) : "default";
  r["samples"] = samples > 0 ? std::to_string(samples) : "default";
  r["seed"] = std::to_string(seed);
  r["workers"] = std::to_string(workers);
  std::string hs;
  for (double h : hbars) hs += (hs.empty() ? "" : ",") + format_double(h);
  r["hbar"] = hs;
  r["out"] = out_dir;
  for (const auto& [k, v] : tolerances) r["tolerance." + k] = format_double(v);
  return r;
}

double ExperimentConfig::tol(const std::string& key, double fallback) const {
  const auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

}  // namespace ymc

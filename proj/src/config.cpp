#include "v2x/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>

namespace v2x {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

void SystemConfig::validate() const {
  require(std::isfinite(total_power_budget_dbm),
          "total_power_budget_dbm must be finite");
  require(bs_budget_fraction > 0.0 && bs_budget_fraction <= 1.0,
          "bs_budget_fraction must be in (0, 1]");
  require(bandwidth_hz > 0.0, "bandwidth_hz must be positive");
  require(std::isfinite(noise_density_dbm_per_hz),
          "noise_density_dbm_per_hz must be finite");
  require(sigma_eps_sq >= 0.0, "sigma_eps_sq must be non-negative");
  require(c_min >= 0.0 && std::isfinite(c_min),
          "c_min must be non-negative and finite");
  require(pathloss_exp > 0.0, "pathloss_exp must be positive");
  require(bs_radius_m > 0.0, "bs_radius_m must be positive");
  require(rsu_radius_m > 0.0, "rsu_radius_m must be positive");
  require(std::isfinite(circuit_power_dbm),
          "circuit_power_dbm must be finite");
  require(t1 == 0.5, "t1 must equal 0.5");
  require(t2 == 0.5, "t2 must equal 0.5");
  require(num_rsus == 2, "num_rsus must equal 2");
  require(vehicles_per_rsu == 2, "vehicles_per_rsu must equal 2");
  require(p_max_w() > 0.0, "p_max_w derived from total_power_budget_dbm "
          "and bs_budget_fraction must be positive");
  require(q_max_w() > 0.0, "q_max_w derived from total_power_budget_dbm "
          "and bs_budget_fraction must be positive");
  require(noise_w() > 0.0, "noise_w derived from noise_density_dbm_per_hz "
          "must be positive");
  require(circuit_w() > 0.0, "circuit_w derived from circuit_power_dbm "
          "must be positive");
}

SystemConfig load_config(const std::string& path) {
  static const char* kKnownKeys[] = {
      "total_power_budget_dbm", "bs_budget_fraction", "bandwidth_hz",
      "noise_density_dbm_per_hz", "sigma_eps_sq", "c_min", "pathloss_exp",
      "bs_radius_m", "rsu_radius_m", "circuit_power_dbm", "t1", "t2",
      "num_rsus", "vehicles_per_rsu"};

  std::ifstream in(path);
  require(in.good(), "cannot open config file: " + path);

  std::map<std::string, double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    require(eq != std::string::npos,
            "config error at line " + std::to_string(lineno) +
                ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    require(!key.empty() && !val.empty(),
            "config error at line " + std::to_string(lineno) +
                ": expected key = value");
    bool known = false;
    for (const char* k : kKnownKeys) known = known || key == k;
    require(known, "config error at line " + std::to_string(lineno) +
                ": unknown key '" + key + "'");
    require(!values.count(key), "config error at line " +
                std::to_string(lineno) + ": duplicate key '" + key + "'");
    char* end = nullptr;
    double parsed = std::strtod(val.c_str(), &end);
    require(end == val.c_str() + val.size() && std::isfinite(parsed),
            "config error at line " + std::to_string(lineno) +
                ": cannot parse value for '" + key + "'");
    values[key] = parsed;
  }

  SystemConfig cfg;
  struct Field {
    const char* name;
    double* target;
  };
  double num_rsus_d = 2, vehicles_d = 2;
  const Field fields[] = {
      {"total_power_budget_dbm", &cfg.total_power_budget_dbm},
      {"bs_budget_fraction", &cfg.bs_budget_fraction},
      {"bandwidth_hz", &cfg.bandwidth_hz},
      {"noise_density_dbm_per_hz", &cfg.noise_density_dbm_per_hz},
      {"sigma_eps_sq", &cfg.sigma_eps_sq},
      {"c_min", &cfg.c_min},
      {"pathloss_exp", &cfg.pathloss_exp},
      {"bs_radius_m", &cfg.bs_radius_m},
      {"rsu_radius_m", &cfg.rsu_radius_m},
      {"circuit_power_dbm", &cfg.circuit_power_dbm},
      {"t1", &cfg.t1},
      {"t2", &cfg.t2},
      {"num_rsus", &num_rsus_d},
      {"vehicles_per_rsu", &vehicles_d},
  };
  for (const auto& f : fields) {
    auto it = values.find(f.name);
    require(it != values.end(),
            std::string("config error: missing required field '") + f.name +
                "'");
    *f.target = it->second;
  }
  require(num_rsus_d == static_cast<int>(num_rsus_d),
          "config error: num_rsus must be an integer");
  require(vehicles_d == static_cast<int>(vehicles_d),
          "config error: vehicles_per_rsu must be an integer");
  cfg.num_rsus = static_cast<int>(num_rsus_d);
  cfg.vehicles_per_rsu = static_cast<int>(vehicles_d);

  cfg.validate();
  return cfg;
}

SystemConfig reference_config() { return SystemConfig{}; }

}  // namespace v2x

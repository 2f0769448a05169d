#pragma once

#include <cmath>
#include <string>

namespace v2x {

inline double dbm_to_w(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double w_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

// All scalar parameters of the network plus the unit conventions used
// throughout: powers enter in dBm, distances in meters, rates in bits/s/Hz.
struct SystemConfig {
  double total_power_budget_dbm = 45.0;  // BS + both RSUs combined
  double bs_budget_fraction = 0.5;       // P_max share; rest split across RSUs
  double bandwidth_hz = 1e6;
  double noise_density_dbm_per_hz = -170.0;
  double sigma_eps_sq = 0.0;  // channel estimation error variance
  double c_min = 0.5;         // per-link rate floor, bits/s/Hz
  double pathloss_exp = 4.0;
  double bs_radius_m = 50.0;
  double rsu_radius_m = 20.0;
  double circuit_power_dbm = 5.0;
  double t1 = 0.5;  // slot fractions
  double t2 = 0.5;
  int num_rsus = 2;
  int vehicles_per_rsu = 2;

  double total_budget_w() const { return dbm_to_w(total_power_budget_dbm); }
  double p_max_w() const { return total_budget_w() * bs_budget_fraction; }
  double q_max_w() const {
    return total_budget_w() * (1.0 - bs_budget_fraction) / num_rsus;
  }
  double noise_w() const {
    return dbm_to_w(noise_density_dbm_per_hz + 10.0 * std::log10(bandwidth_hz));
  }
  double circuit_w() const { return dbm_to_w(circuit_power_dbm); }
  // SINR threshold equivalent to the rate floor
  double rate_threshold() const { return std::exp2(c_min) - 1.0; }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Strict flat key=value parser; '#' starts a comment. Unknown, duplicate,
// malformed, or missing keys all throw std::invalid_argument with the line
// number and field name. The parsed config is validated before returning.
SystemConfig load_config(const std::string& path);

SystemConfig reference_config();

}  // namespace v2x

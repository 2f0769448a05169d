#pragma once

#include <array>
#include <utility>

#include "v2x/channel.hpp"
#include "v2x/config.hpp"

namespace v2x {

// How much power the neighboring RSU is assumed to radiate when computing
// inter-cell interference: its full budget (conservative) or its currently
// allocated power.
enum class CrossInterferenceMode { full_budget, allocated };

struct PowerAllocation {
  std::array<double, 2> alpha{};                   // BS coefficients
  std::array<std::array<double, 2>, 2> beta{};     // [rsu][vehicle]
  std::array<double, 2> xi{};                      // BD reflection coefficients
};

struct RateReport {
  std::array<double, 2> gamma_rsu{};
  std::array<std::array<double, 2>, 2> gamma_veh{};
  std::array<double, 2> c_rsu{};                   // bits/s/Hz
  std::array<std::array<double, 2>, 2> c_veh{};    // bits/s/Hz
  std::array<std::array<double, 2>, 2> e2e_rate{}; // bits/s/Hz
  double sum_rate_bps = 0.0;
  double total_power_w = 0.0;
  double ee_bits_per_joule = 0.0;
};

struct EstimationInterference {
  double bs_w = 0.0;                    // first slot, at the RSUs
  std::array<double, 2> rsu_w{};        // second slot, at the vehicles of RSU m
  double total_w = 0.0;
};

// First-slot SINRs (gamma_1, gamma_2) at the two RSUs.
std::array<double, 2> sinr_first_slot(const NetworkRealization& real,
                                      const PowerAllocation& alloc,
                                      const SystemConfig& config);

// Second-slot SINRs at the vehicles, [rsu][vehicle].
std::array<std::array<double, 2>, 2> sinr_second_slot(
    const NetworkRealization& real, const PowerAllocation& alloc,
    const SystemConfig& config,
    CrossInterferenceMode mode = CrossInterferenceMode::full_budget);

// t * log2(1 + gamma), bits/s/Hz.
double rate(double gamma, double t);

// Relay end-to-end rates (half the min of the two hops) and the bandwidth-
// scaled network sum rate in bits/s.
std::pair<std::array<std::array<double, 2>, 2>, double> end_to_end_and_sum(
    const std::array<double, 2>& c_rsu,
    const std::array<std::array<double, 2>, 2>& c_veh,
    const SystemConfig& config);

// Transmit power of all nodes plus circuit power, watts.
double total_power(const PowerAllocation& alloc, const SystemConfig& config);

double energy_efficiency(
    const NetworkRealization& real, const PowerAllocation& alloc,
    const SystemConfig& config,
    CrossInterferenceMode mode = CrossInterferenceMode::full_budget);

// The extra interference terms caused by the channel estimation error.
EstimationInterference estimation_interference(const PowerAllocation& alloc,
                                               const SystemConfig& config);

RateReport evaluate(
    const NetworkRealization& real, const PowerAllocation& alloc,
    const SystemConfig& config,
    CrossInterferenceMode mode = CrossInterferenceMode::full_budget);

// Constraint slacks (non-negative means satisfied):
//   BS:  {rate floor at RSU 1, rate floor at RSU 2, power budget, coefficient sum}
//   RSU: {rate floor at vehicle 1, rate floor at vehicle 2, power budget,
//         coefficient sum, reflection bound}
// Power-type slacks are in watts, the rest dimensionless.
std::array<double, 4> bs_constraint_slacks(const NetworkRealization& real,
                                           const PowerAllocation& alloc,
                                           const SystemConfig& config);

std::array<double, 5> rsu_constraint_slacks(
    const NetworkRealization& real, const PowerAllocation& alloc,
    const SystemConfig& config, int m,
    CrossInterferenceMode mode = CrossInterferenceMode::full_budget);

}  // namespace v2x

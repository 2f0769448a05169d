#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "v2x/config.hpp"
#include "v2x/solver.hpp"

namespace v2x {

enum class Baseline { bc_noma, conventional_noma };

const char* baseline_name(Baseline b);

enum class SweepVariable { total_power_dbm, sigma_eps, rsu_radius_m };

const char* sweep_variable_name(SweepVariable v);

struct Sweep {
  SweepVariable variable = SweepVariable::total_power_dbm;
  std::vector<double> values;
  int trials = 500;
  SystemConfig base_config;
  std::vector<Baseline> baselines{Baseline::bc_noma,
                                  Baseline::conventional_noma};
  std::uint64_t seed0 = 1;
  SolverConfig solver;
  int jobs = 1;
};

struct BaselineStats {
  double mean_ee_bits_per_joule = 0.0;
  double mean_sum_rate_bps = 0.0;
  double mean_total_power_w = 0.0;
  double mean_est_interference_w = 0.0;
  double feasible_fraction = 0.0;
  int feasible_count = 0;
};

struct SweepRow {
  double value = 0.0;
  std::vector<BaselineStats> stats;  // one entry per sweep baseline, in order
};

// Applies the swept quantity to a copy of the config. The sigma_eps sweep is
// parameterized by the error std-dev; it sets sigma_eps_sq to value^2.
SystemConfig apply_sweep_value(const SystemConfig& base, SweepVariable var,
                               double value);

TrialMetrics run_trial(const SystemConfig& config, std::uint64_t seed,
                       Baseline baseline,
                       const SolverConfig& solver_cfg = SolverConfig{});

// Monte-Carlo sweep. Trial i of every (value, baseline) cell uses seed
// seed0 + i, so all cells share channel realizations. Means cover feasible
// trials only; rows report the count. Deterministic for any jobs value.
std::vector<SweepRow> run_sweep(const Sweep& sweep);

void write_sweep_csv(const Sweep& sweep, const std::vector<SweepRow>& rows,
                     std::ostream& out);

// Companion matplotlib script that reads the CSV by column name.
std::string plot_script(const Sweep& sweep, const std::string& csv_name);

}  // namespace v2x

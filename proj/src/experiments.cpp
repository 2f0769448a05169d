#include "v2x/experiments.hpp"

#include <cstdio>
#include <ostream>

#include "v2x/channel.hpp"
#include "v2x/parallel.hpp"
#include "v2x/rates.hpp"

namespace v2x {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

BaselineStats aggregate(const std::vector<TrialMetrics>& trials) {
  BaselineStats st;
  for (const auto& t : trials) {
    if (!t.feasible) continue;
    ++st.feasible_count;
    st.mean_ee_bits_per_joule += t.report.ee_bits_per_joule;
    st.mean_sum_rate_bps += t.report.sum_rate_bps;
    st.mean_total_power_w += t.report.total_power_w;
    st.mean_est_interference_w += t.est_interference_total_w;
  }
  if (st.feasible_count > 0) {
    st.mean_ee_bits_per_joule /= st.feasible_count;
    st.mean_sum_rate_bps /= st.feasible_count;
    st.mean_total_power_w /= st.feasible_count;
    st.mean_est_interference_w /= st.feasible_count;
  }
  st.feasible_fraction =
      trials.empty() ? 0.0
                     : static_cast<double>(st.feasible_count) / trials.size();
  return st;
}

}  // namespace

const char* baseline_name(Baseline b) {
  return b == Baseline::bc_noma ? "bc_noma" : "conventional_noma";
}

const char* sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::total_power_dbm: return "total_power_dbm";
    case SweepVariable::sigma_eps: return "sigma_eps";
    case SweepVariable::rsu_radius_m: return "rsu_radius_m";
  }
  return "unknown";
}

SystemConfig apply_sweep_value(const SystemConfig& base, SweepVariable var,
                               double value) {
  SystemConfig cfg = base;
  switch (var) {
    case SweepVariable::total_power_dbm:
      cfg.total_power_budget_dbm = value;
      break;
    case SweepVariable::sigma_eps:
      cfg.sigma_eps_sq = value * value;
      break;
    case SweepVariable::rsu_radius_m:
      cfg.rsu_radius_m = value;
      break;
  }
  cfg.validate();
  return cfg;
}

TrialMetrics run_trial(const SystemConfig& config, std::uint64_t seed,
                       Baseline baseline, const SolverConfig& solver_cfg) {
  Topology topo = sample_topology(config, seed);
  NetworkRealization real = sample_channels(topo, config, seed);
  SolverConfig scfg = solver_cfg;
  scfg.conventional = baseline == Baseline::conventional_noma;
  return solve_full(real, config, scfg).metrics;
}

std::vector<SweepRow> run_sweep(const Sweep& sweep) {
  std::vector<SweepRow> rows;
  rows.reserve(sweep.values.size());
  for (double value : sweep.values) {
    const SystemConfig cfg =
        apply_sweep_value(sweep.base_config, sweep.variable, value);
    SweepRow row;
    row.value = value;
    for (Baseline baseline : sweep.baselines) {
      std::vector<TrialMetrics> trials(sweep.trials);
      parallel_for(sweep.trials, sweep.jobs, [&](int i) {
        trials[i] = run_trial(cfg, sweep.seed0 + static_cast<std::uint64_t>(i),
                              baseline, sweep.solver);
      });
      row.stats.push_back(aggregate(trials));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(const Sweep& sweep, const std::vector<SweepRow>& rows,
                     std::ostream& out) {
  out << sweep_variable_name(sweep.variable);
  for (Baseline b : sweep.baselines) {
    const std::string p = baseline_name(b);
    out << ',' << p << "_mean_ee_bits_per_joule"
        << ',' << p << "_mean_sum_rate_bps"
        << ',' << p << "_mean_total_power_w"
        << ',' << p << "_mean_est_interference_w"
        << ',' << p << "_feasible_fraction"
        << ',' << p << "_feasible_count";
  }
  out << '\n';
  for (const auto& row : rows) {
    out << fmt17(row.value);
    for (const auto& st : row.stats) {
      out << ',' << fmt17(st.mean_ee_bits_per_joule)
          << ',' << fmt17(st.mean_sum_rate_bps)
          << ',' << fmt17(st.mean_total_power_w)
          << ',' << fmt17(st.mean_est_interference_w)
          << ',' << fmt17(st.feasible_fraction)
          << ',' << st.feasible_count;
    }
    out << '\n';
  }
}

std::string plot_script(const Sweep& sweep, const std::string& csv_name) {
  const std::string var = sweep_variable_name(sweep.variable);
  std::string cols;
  for (Baseline b : sweep.baselines) {
    cols += "    \"";
    cols += baseline_name(b);
    cols += "_mean_ee_bits_per_joule\",\n";
  }
  return "#!/usr/bin/env python3\n"
         "import csv\n"
         "import matplotlib.pyplot as plt\n"
         "\n"
         "rows = list(csv.DictReader(open(\"" + csv_name + "\")))\n"
         "x = [float(r[\"" + var + "\"]) for r in rows]\n"
         "series = [\n" + cols +
         "]\n"
         "for col in series:\n"
         "    plt.plot(x, [float(r[col]) for r in rows], marker=\"o\","
         " label=col)\n"
         "plt.xlabel(\"" + var + "\")\n"
         "plt.ylabel(\"mean energy efficiency (bits/joule)\")\n"
         "plt.legend()\n"
         "plt.grid(True)\n"
         "plt.tight_layout()\n"
         "plt.savefig(\"" + csv_name + ".png\", dpi=150)\n";
}

}  // namespace v2x

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "v2x/channel.hpp"
#include "v2x/config.hpp"
#include "v2x/experiments.hpp"
#include "v2x/oracle.hpp"
#include "v2x/parallel.hpp"
#include "v2x/rates.hpp"
#include "v2x/solver.hpp"

namespace {

using nlohmann::ordered_json;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* status_name(v2x::SolveStatus s) {
  switch (s) {
    case v2x::SolveStatus::converged: return "converged";
    case v2x::SolveStatus::not_converged: return "not_converged";
    case v2x::SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

std::string join17(const std::vector<double>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += fmt17(xs[i]);
  }
  return out;
}

void print_solution_text(std::ostream& out, const v2x::FullSolution& full) {
  const auto& tm = full.metrics;
  const auto& rep = tm.report;
  out << "feasible: " << (tm.feasible ? "true" : "false") << '\n';
  out << "status_bs: " << status_name(full.bs.status) << '\n';
  for (int m = 0; m < 2; ++m)
    out << "status_rsu" << m + 1 << ": " << status_name(full.rsu[m].status)
        << '\n';
  out << "objective_bs_w: " << fmt17(full.bs.objective_w) << '\n';
  for (int m = 0; m < 2; ++m)
    out << "objective_rsu" << m + 1
        << "_w: " << fmt17(full.rsu[m].objective_w) << '\n';
  out << "alpha: " << join17({tm.alloc.alpha[0], tm.alloc.alpha[1]}) << '\n';
  for (int m = 0; m < 2; ++m)
    out << "beta" << m + 1 << ": "
        << join17({tm.alloc.beta[m][0], tm.alloc.beta[m][1]}) << '\n';
  out << "xi: " << join17({tm.alloc.xi[0], tm.alloc.xi[1]}) << '\n';
  out << "c_rsu: " << join17({rep.c_rsu[0], rep.c_rsu[1]}) << '\n';
  for (int m = 0; m < 2; ++m)
    out << "c_veh" << m + 1 << ": "
        << join17({rep.c_veh[m][0], rep.c_veh[m][1]}) << '\n';
  for (int m = 0; m < 2; ++m)
    out << "e2e" << m + 1 << ": "
        << join17({rep.e2e_rate[m][0], rep.e2e_rate[m][1]}) << '\n';
  out << "sum_rate_bps: " << fmt17(rep.sum_rate_bps) << '\n';
  out << "total_power_w: " << fmt17(rep.total_power_w) << '\n';
  out << "ee_bits_per_joule: " << fmt17(rep.ee_bits_per_joule) << '\n';
  out << "est_interference_w: " << fmt17(tm.est_interference_total_w) << '\n';
  out << "residuals_bs: " << join17(full.bs.residuals) << '\n';
  for (int m = 0; m < 2; ++m)
    out << "residuals_rsu" << m + 1 << ": " << join17(full.rsu[m].residuals)
        << '\n';
}

ordered_json solution_json(const v2x::FullSolution& full) {
  const auto& tm = full.metrics;
  const auto& rep = tm.report;
  ordered_json j;
  j["feasible"] = tm.feasible;
  j["status"] = {{"bs", status_name(full.bs.status)},
                 {"rsu1", status_name(full.rsu[0].status)},
                 {"rsu2", status_name(full.rsu[1].status)}};
  j["objective_w"] = {{"bs", full.bs.objective_w},
                      {"rsu1", full.rsu[0].objective_w},
                      {"rsu2", full.rsu[1].objective_w}};
  j["alpha"] = tm.alloc.alpha;
  j["beta"] = tm.alloc.beta;
  j["xi"] = tm.alloc.xi;
  j["c_rsu"] = rep.c_rsu;
  j["c_veh"] = rep.c_veh;
  j["e2e_rate"] = rep.e2e_rate;
  j["sum_rate_bps"] = rep.sum_rate_bps;
  j["total_power_w"] = rep.total_power_w;
  j["ee_bits_per_joule"] = rep.ee_bits_per_joule;
  j["est_interference_w"] = tm.est_interference_total_w;
  j["residuals"] = {{"bs", full.bs.residuals},
                    {"rsu1", full.rsu[0].residuals},
                    {"rsu2", full.rsu[1].residuals}};
  return j;
}

void write_trace_csv(std::ostream& out, const v2x::FullSolution& full) {
  out << "stage,iter,objective_w,max_residual_w,step\n";
  auto dump = [&](const char* stage, const std::vector<v2x::TraceRow>& rows) {
    for (const auto& r : rows)
      out << stage << ',' << r.iter << ',' << fmt17(r.objective_w) << ','
          << fmt17(r.max_residual_w) << ',' << fmt17(r.step) << '\n';
  };
  dump("bs", full.bs.trace);
  dump("rsu1", full.rsu[0].trace);
  dump("rsu2", full.rsu[1].trace);
}

struct VerifyRow {
  std::uint64_t seed = 0;
  double bs_solver = 0.0, bs_oracle = 0.0;
  std::array<double, 2> rsu_solver{}, rsu_oracle{};
  double max_gap = 0.0;
  bool slack_ok = true;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power allocation toolkit for backscatter-aided NOMA V2X "
               "relay networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string grad_mode_s = "rederived";
  std::string cross_mode_s = "full_budget";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "Config file (defaults to built-in reference parameters)");
    cmd->add_option("--grad-mode", grad_mode_s, "Gradient form")
        ->check(CLI::IsMember({"rederived", "as_printed"}));
    cmd->add_option("--cross-mode", cross_mode_s,
                    "Neighbor interference assumption")
        ->check(CLI::IsMember({"full_budget", "allocated"}));
  };

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve one realization");
  std::uint64_t seed = 42;
  std::string format = "text";
  std::string baseline_s = "bc_noma";
  std::string trace_path;
  add_common(solve_cmd);
  solve_cmd->add_option("--seed", seed, "Channel realization seed");
  solve_cmd->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"text", "json"}));
  solve_cmd->add_option("--baseline", baseline_s, "Scheme to solve")
      ->check(CLI::IsMember({"bc_noma", "conventional_noma"}));
  solve_cmd->add_option("--trace", trace_path,
                        "Write per-iteration trace CSV to this path");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo parameter sweep");
  std::string var_s = "total_power_dbm";
  double from = 20.0, to = 45.0;
  int points = 6;
  std::vector<double> values;
  int trials = 500;
  std::uint64_t seed0 = 1;
  std::string sweep_baseline_s = "both";
  int jobs = 1;
  std::string out_path;
  std::string plot_path;
  add_common(sweep_cmd);
  sweep_cmd->add_option("--var", var_s, "Swept variable")
      ->check(CLI::IsMember({"total_power_dbm", "sigma_eps", "rsu_radius_m"}));
  sweep_cmd->add_option("--from", from, "Range start");
  sweep_cmd->add_option("--to", to, "Range end");
  sweep_cmd->add_option("--points", points, "Number of range points")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--values", values,
                        "Explicit sweep values (overrides --from/--to)");
  sweep_cmd->add_option("--trials", trials, "Trials per sweep point")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed0", seed0, "Base seed for trial streams");
  sweep_cmd->add_option("--baseline", sweep_baseline_s, "Schemes to run")
      ->check(CLI::IsMember({"both", "bc_noma", "conventional_noma"}));
  sweep_cmd->add_option("--jobs", jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", out_path, "CSV output path (default stdout)");
  sweep_cmd->add_option("--plot-script", plot_path,
                        "Also write a matplotlib script to this path");

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "Compare solver against grid-search oracle");
  int instances = 50;
  int grid_bs = 401;
  int grid_rsu = 201;
  std::uint64_t vseed0 = 1;
  double threshold = 0.02;
  int vjobs = 1;
  add_common(verify_cmd);
  verify_cmd->add_option("--instances", instances, "Feasible instances to check")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--grid-bs", grid_bs, "Grid points per BS axis")
      ->check(CLI::Range(2, 100000));
  verify_cmd->add_option("--grid-rsu", grid_rsu, "Grid points per RSU axis")
      ->check(CLI::Range(2, 100000));
  verify_cmd->add_option("--seed0", vseed0, "First seed scanned");
  verify_cmd->add_option("--threshold", threshold, "Relative gap bound")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--jobs", vjobs, "Worker threads")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    v2x::SystemConfig config = config_path.empty()
                                   ? v2x::reference_config()
                                   : v2x::load_config(config_path);
    config.validate();
    v2x::SolverConfig scfg;
    scfg.grad_mode = grad_mode_s == "rederived" ? v2x::GradMode::rederived
                                                : v2x::GradMode::as_printed;
    scfg.cross_mode = cross_mode_s == "full_budget"
                          ? v2x::CrossInterferenceMode::full_budget
                          : v2x::CrossInterferenceMode::allocated;

    if (*solve_cmd) {
      scfg.conventional = baseline_s == "conventional_noma";
      scfg.keep_trace = !trace_path.empty();
      v2x::Topology topo = v2x::sample_topology(config, seed);
      v2x::NetworkRealization real = v2x::sample_channels(topo, config, seed);
      v2x::FullSolution full = v2x::solve_full(real, config, scfg);
      if (!trace_path.empty()) {
        std::ofstream tf(trace_path);
        if (!tf.good()) {
          std::cerr << "error: cannot write trace file: " << trace_path
                    << '\n';
          return 1;
        }
        write_trace_csv(tf, full);
      }
      if (format == "json")
        std::cout << solution_json(full).dump(2) << '\n';
      else
        print_solution_text(std::cout, full);
      return full.metrics.feasible ? 0 : 2;
    }

    if (*sweep_cmd) {
      v2x::Sweep sweep;
      sweep.base_config = config;
      sweep.solver = scfg;
      sweep.trials = trials;
      sweep.seed0 = seed0;
      sweep.jobs = jobs;
      if (var_s == "sigma_eps")
        sweep.variable = v2x::SweepVariable::sigma_eps;
      else if (var_s == "rsu_radius_m")
        sweep.variable = v2x::SweepVariable::rsu_radius_m;
      else
        sweep.variable = v2x::SweepVariable::total_power_dbm;
      if (!values.empty()) {
        sweep.values = values;
      } else {
        for (int i = 0; i < points; ++i)
          sweep.values.push_back(
              points == 1 ? from : from + (to - from) * i / (points - 1));
      }
      std::sort(sweep.values.begin(), sweep.values.end());
      if (sweep_baseline_s == "bc_noma")
        sweep.baselines = {v2x::Baseline::bc_noma};
      else if (sweep_baseline_s == "conventional_noma")
        sweep.baselines = {v2x::Baseline::conventional_noma};

      const auto rows = v2x::run_sweep(sweep);
      std::string csv_name = out_path.empty() ? "sweep.csv" : out_path;
      if (out_path.empty()) {
        v2x::write_sweep_csv(sweep, rows, std::cout);
      } else {
        std::ofstream of(out_path, std::ios::binary);
        if (!of.good()) {
          std::cerr << "error: cannot write output file: " << out_path << '\n';
          return 1;
        }
        v2x::write_sweep_csv(sweep, rows, of);
        std::cerr << "wrote " << rows.size() << " rows to " << out_path
                  << '\n';
      }
      if (!plot_path.empty()) {
        std::ofstream pf(plot_path);
        if (!pf.good()) {
          std::cerr << "error: cannot write plot script: " << plot_path
                    << '\n';
          return 1;
        }
        pf << v2x::plot_script(sweep, csv_name);
      }
      return 0;
    }

    if (*verify_cmd) {
      const double th = config.rate_threshold();
      const double slack_bs = (2.0 + th) * config.p_max_w() / (grid_bs - 1);
      const double slack_rsu = (2.0 + th) * config.q_max_w() / (grid_rsu - 1);

      // pick seeds whose realization admits a feasible point everywhere
      std::vector<std::uint64_t> seeds;
      const std::uint64_t budget = vseed0 + 1000ULL * instances;
      for (std::uint64_t s = vseed0; s < budget &&
           static_cast<int>(seeds.size()) < instances; ++s) {
        auto topo = v2x::sample_topology(config, s);
        auto real = v2x::sample_channels(topo, config, s);
        if (!v2x::bs_min_power_point(real, config).feasible) continue;
        bool ok = true;
        for (int m = 0; m < 2 && ok; ++m)
          ok = v2x::rsu_min_power_scan(real, config, m, 101,
                                       v2x::PowerAllocation{})
                   .feasible;
        if (ok) seeds.push_back(s);
      }
      if (static_cast<int>(seeds.size()) < instances) {
        std::cerr << "error: found only " << seeds.size()
                  << " feasible instances\n";
        return 1;
      }

      std::vector<VerifyRow> table(seeds.size());
      v2x::parallel_for(static_cast<int>(seeds.size()), vjobs, [&](int i) {
        VerifyRow row;
        row.seed = seeds[i];
        auto topo = v2x::sample_topology(config, seeds[i]);
        auto real = v2x::sample_channels(topo, config, seeds[i]);
        auto bs = v2x::solve_bs_power(real, config, scfg);
        auto obs = v2x::grid_search_bs(real, config, grid_bs);
        row.bs_solver = bs.objective_w;
        row.bs_oracle = obs.objective_w;
        double gap = obs.objective_w > 0.0
                         ? (bs.objective_w - obs.objective_w) / obs.objective_w
                         : 0.0;
        row.max_gap = std::max(0.0, gap);
        row.slack_ok = bs.objective_w >= obs.objective_w - slack_bs;
        for (int m = 0; m < 2; ++m) {
          auto rs = v2x::solve_rsu_power(real, config, scfg, m);
          auto ors = v2x::grid_search_rsu(real, config, grid_rsu, m);
          row.rsu_solver[m] = rs.objective_w;
          row.rsu_oracle[m] = ors.objective_w;
          double g = ors.objective_w > 0.0
                         ? (rs.objective_w - ors.objective_w) / ors.objective_w
                         : 0.0;
          row.max_gap = std::max(row.max_gap, g);
          row.slack_ok =
              row.slack_ok && rs.objective_w >= ors.objective_w - slack_rsu;
        }
        table[i] = row;
      });

      double max_gap = 0.0;
      bool all_slack_ok = true;
      std::printf("%10s %14s %14s %14s %14s %9s %6s\n", "seed", "bs_solver_w",
                  "bs_oracle_w", "rsu_solver_w", "rsu_oracle_w", "gap_pct",
                  "slack");
      for (const auto& row : table) {
        std::printf("%10llu %14.6e %14.6e %14.6e %14.6e %9.4f %6s\n",
                    static_cast<unsigned long long>(row.seed), row.bs_solver,
                    row.bs_oracle, row.rsu_solver[0] + row.rsu_solver[1],
                    row.rsu_oracle[0] + row.rsu_oracle[1], 100.0 * row.max_gap,
                    row.slack_ok ? "ok" : "LOW");
        max_gap = std::max(max_gap, row.max_gap);
        all_slack_ok = all_slack_ok && row.slack_ok;
      }
      std::printf("max gap: %.4f%% (threshold %.4f%%), lower-bound check %s\n",
                  100.0 * max_gap, 100.0 * threshold,
                  all_slack_ok ? "passed" : "FAILED");
      return (max_gap <= threshold && all_slack_ok) ? 0 : 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

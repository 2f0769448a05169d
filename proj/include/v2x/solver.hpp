#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "v2x/channel.hpp"
#include "v2x/config.hpp"
#include "v2x/rates.hpp"

namespace v2x {

// Multipliers of the first-slot power minimization: rate floors at the two
// RSUs, transmit power budget, coefficient-sum bound.
struct DualStateBS {
  double psi1 = 0.0;
  double psi2 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

// Multipliers of the second-slot problem, one entry per RSU: rate floors at
// the two vehicles, power budget, coefficient-sum bound, reflection bound.
struct DualStateRSU {
  std::array<double, 2> eta1{};
  std::array<double, 2> eta2{};
  std::array<double, 2> mu{};
  std::array<double, 2> zeta_sum{};
  std::array<double, 2> upsilon{};
};

enum class StepSchedule { constant, inverse_sqrt };

// rederived: analytic gradient of the Lagrangian (finite-difference checked).
// as_printed: the published primal expressions taken verbatim, kept for
// fidelity experiments; they differ from the analytic gradient in a few
// coupling terms.
enum class GradMode { rederived, as_printed };

struct SolverConfig {
  double step0 = 0.1;
  StepSchedule schedule = StepSchedule::inverse_sqrt;
  int max_iters = 20000;
  double tol_obj = 1e-6;   // relative objective change
  double tol_feas = 1e-6;  // absolute residual tolerance, watts
  std::array<double, 2> init_alpha{0.25, 0.25};
  std::array<double, 2> init_beta{0.25, 0.25};
  double init_xi = 0.5;
  double init_multiplier = 0.1;
  GradMode grad_mode = GradMode::rederived;
  CrossInterferenceMode cross_mode = CrossInterferenceMode::full_budget;
  bool conventional = false;  // pin xi to 0 (no backscatter)
  bool keep_trace = false;
};

enum class SolveStatus { converged, not_converged, infeasible };

struct TraceRow {
  int iter = 0;
  double objective_w = 0.0;
  double max_residual_w = 0.0;  // largest constraint violation
  double step = 0.0;
};

struct Solution {
  PowerAllocation alloc;
  bool feasible = false;
  SolveStatus status = SolveStatus::infeasible;
  double objective_w = 0.0;
  std::vector<double> residuals;  // constraint slacks at the reported point
  int iters_used = 0;
  std::vector<TraceRow> trace;
};

struct TrialMetrics {
  bool feasible = false;
  PowerAllocation alloc;
  RateReport report;
  std::array<double, 4> bs_residuals{};
  std::array<std::array<double, 5>, 2> rsu_residuals{};
  double est_interference_total_w = 0.0;
};

struct FullSolution {
  Solution bs;
  std::array<Solution, 2> rsu;
  TrialMetrics metrics;
};

// Lagrangians of the two sub-problems, watt scale. Used by the solver and by
// the finite-difference gradient checks.
double lagrangian_bs(const NetworkRealization& real,
                     const std::array<double, 2>& alpha,
                     const DualStateBS& dual, const SystemConfig& config);

double lagrangian_rsu(const NetworkRealization& real,
                      const std::array<double, 2>& beta, double xi,
                      const DualStateRSU& dual, const SystemConfig& config,
                      int m, const PowerAllocation& context,
                      CrossInterferenceMode mode);

std::array<double, 2> grad_alpha(const NetworkRealization& real,
                                 const PowerAllocation& alloc,
                                 const DualStateBS& dual,
                                 const SystemConfig& config,
                                 GradMode mode = GradMode::rederived);

std::array<double, 3> grad_beta_xi(const NetworkRealization& real,
                                   const PowerAllocation& alloc,
                                   const DualStateRSU& dual,
                                   const SystemConfig& config, int m,
                                   GradMode mode = GradMode::rederived);

// Closed-form minimum-power points (both rate floors active). These give the
// componentwise-minimal feasible point of each sub-problem, used for the
// feasibility pre-check and to polish the iterative solution.
struct ClosedFormPoint {
  bool feasible = false;
  std::array<double, 2> coeffs{};  // alpha or beta
  double xi = 0.0;
  double objective_w = 0.0;
};

ClosedFormPoint bs_min_power_point(const NetworkRealization& real,
                                   const SystemConfig& config);

ClosedFormPoint rsu_min_power_point(
    const NetworkRealization& real, const SystemConfig& config, int m,
    double xi, const PowerAllocation& context,
    CrossInterferenceMode mode = CrossInterferenceMode::full_budget);

// Best closed-form point over a uniform grid of reflection coefficients.
ClosedFormPoint rsu_min_power_scan(
    const NetworkRealization& real, const SystemConfig& config, int m,
    int n_xi, const PowerAllocation& context,
    CrossInterferenceMode mode = CrossInterferenceMode::full_budget,
    bool xi_zero_only = false);

Solution solve_bs_power(const NetworkRealization& real,
                        const SystemConfig& config,
                        const SolverConfig& solver_cfg);

Solution solve_rsu_power(const NetworkRealization& real,
                         const SystemConfig& config,
                         const SolverConfig& solver_cfg, int m,
                         const PowerAllocation* context = nullptr);

FullSolution solve_full(const NetworkRealization& real,
                        const SystemConfig& config,
                        const SolverConfig& solver_cfg);

namespace detail {

inline double pos(double x) { return x > 0.0 ? x : 0.0; }

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// One projected primal descent step; gradient and its scale are watt-sized,
// the step acts on the dimensionless coefficient.
inline double primal_step(double x, double step, double grad_w,
                          double scale_w) {
  return clamp01(x - step * grad_w / scale_w);
}

// One projected multiplier ascent step in normalized coordinates.
inline double dual_step(double d, double step, double slack_w,
                        double scale_w) {
  return pos(d - step * slack_w / scale_w);
}

}  // namespace detail

}  // namespace v2x

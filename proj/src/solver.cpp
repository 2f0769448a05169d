#include "v2x/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace v2x {

namespace {

// Uniform inflation applied to the closed-form points so the active rate
// constraints end up strictly satisfied after rounding.
constexpr double kClosedFormMargin = 1.0 + 1e-9;
constexpr int kFlatWindow = 10;       // consecutive flat iterations to stop
constexpr int kPrecheckXiGrid = 101;  // reflection grid for feasibility check
constexpr int kPolishXiGrid = 1001;   // reflection grid for the final polish
constexpr int kMaxCoordRounds = 10;   // coupling rounds under allocated mode

double step_size(const SolverConfig& cfg, int itr) {
  if (cfg.schedule == StepSchedule::constant) return cfg.step0;
  return cfg.step0 / std::sqrt(static_cast<double>(itr));
}

double cross_power_w(const PowerAllocation& context,
                     const SystemConfig& config, int m,
                     CrossInterferenceMode mode) {
  if (mode == CrossInterferenceMode::full_budget) return config.q_max_w();
  int other = 1 - m;
  return config.q_max_w() * (context.beta[other][0] + context.beta[other][1]);
}

}  // namespace

double lagrangian_bs(const NetworkRealization& real,
                     const std::array<double, 2>& alpha,
                     const DualStateBS& dual, const SystemConfig& config) {
  PowerAllocation alloc;
  alloc.alpha = alpha;
  auto sl = bs_constraint_slacks(real, alloc, config);
  return config.p_max_w() * (alpha[0] + alpha[1]) - dual.psi1 * sl[0] -
         dual.psi2 * sl[1] - dual.lambda1 * sl[2] - dual.lambda2 * sl[3];
}

double lagrangian_rsu(const NetworkRealization& real,
                      const std::array<double, 2>& beta, double xi,
                      const DualStateRSU& dual, const SystemConfig& config,
                      int m, const PowerAllocation& context,
                      CrossInterferenceMode mode) {
  PowerAllocation alloc = context;
  alloc.beta[m] = beta;
  alloc.xi[m] = xi;
  auto sl = rsu_constraint_slacks(real, alloc, config, m, mode);
  return config.q_max_w() * (beta[0] + beta[1]) - dual.eta1[m] * sl[0] -
         dual.eta2[m] * sl[1] - dual.mu[m] * sl[2] -
         dual.zeta_sum[m] * sl[3] - dual.upsilon[m] * sl[4];
}

std::array<double, 2> grad_alpha(const NetworkRealization& real,
                                 const PowerAllocation& alloc,
                                 const DualStateBS& dual,
                                 const SystemConfig& config, GradMode mode) {
  const double p = config.p_max_w();
  const double s = config.sigma_eps_sq;
  const double th = config.rate_threshold();
  const double g1 = real.g_bs_rsu[0], g2 = real.g_bs_rsu[1];
  const double base = p + dual.lambda1 * p;
  if (mode == GradMode::rederived) {
    return {base + dual.lambda2 - dual.psi1 * (g1 * p - th * p * s) +
                dual.psi2 * th * (g2 * p + p * s),
            base + dual.lambda2 + dual.psi1 * th * p * s -
                dual.psi2 * (g2 * p - th * p * s)};
  }
  // published form: the sum-constraint multiplier appears scaled by the
  // opposite coefficient
  return {base + th * dual.psi2 * (g2 * p + p * s) +
              dual.psi1 * (th * p * s - g1 * p) +
              dual.lambda2 * alloc.alpha[1],
          base + th * p * dual.psi1 * s +
              dual.psi2 * (th * p * s - g2 * p) +
              dual.lambda2 * alloc.alpha[0]};
}

std::array<double, 3> grad_beta_xi(const NetworkRealization& real,
                                   const PowerAllocation& alloc,
                                   const DualStateRSU& dual,
                                   const SystemConfig& config, int m,
                                   GradMode mode) {
  const double q = config.q_max_w();
  const double s = config.sigma_eps_sq;
  const double th = config.rate_threshold();
  const double g1 = real.g_rsu_veh[m][0], g2 = real.g_rsu_veh[m][1];
  const double b1 = real.g_bd_veh[m][0] * real.g_rsu_bd[m];
  const double b2 = real.g_bd_veh[m][1] * real.g_rsu_bd[m];
  const double xi = alloc.xi[m];
  const double be1 = alloc.beta[m][0], be2 = alloc.beta[m][1];
  const double e1 = dual.eta1[m], e2 = dual.eta2[m];
  if (mode == GradMode::rederived) {
    const double eff1 = g1 + xi * b1, eff2 = g2 + xi * b2;
    const double base = q + dual.mu[m] * q + dual.zeta_sum[m];
    return {base - e1 * (q * eff1 - th * s * q) +
                e2 * th * (q * eff2 + s * q),
            base + e1 * th * s * q - e2 * (q * eff2 - th * s * q),
            -e1 * (q * be1 * b1 - th * s) -
                e2 * (q * be2 * b2 - th * (q * be1 * b2 + s)) +
                dual.upsilon[m]};
  }
  // published form: no sum-constraint or NOMA coupling terms, and the error
  // std-dev (not variance) in the reflection expression
  return {q * (1.0 - g1 * e1 - xi * b1 * e1 + th * (e1 + e2) * s +
               dual.mu[m]),
          q * (1.0 - g2 * e2 - xi * b2 * e2 + th * (e1 + e2) * s +
               dual.mu[m]),
          -be1 * b1 * e1 * q - be2 * b2 * e2 * q +
              th * (e1 + e2) * std::sqrt(s) + dual.upsilon[m]};
}

ClosedFormPoint bs_min_power_point(const NetworkRealization& real,
                                   const SystemConfig& config) {
  const double p = config.p_max_w();
  const double s = config.sigma_eps_sq;
  const double v = config.noise_w();
  const double th = config.rate_threshold();
  const double g1 = real.g_bs_rsu[0], g2 = real.g_bs_rsu[1];
  ClosedFormPoint out;
  // both rate floors active:
  //   (g1 - th*s) a1 -        th*s a2 = th*v/p
  //  -th*(g2 + s) a1 + (g2 - th*s) a2 = th*v/p
  const double det =
      (g1 - th * s) * (g2 - th * s) - th * s * th * (g2 + s);
  if (!(det > 0.0)) return out;
  const double r = th * v / p;
  double a1 = r * g2 / det * kClosedFormMargin;
  double a2 = r * (g1 + th * g2) / det * kClosedFormMargin;
  if (!(a1 >= 0.0 && a2 >= 0.0)) return out;
  if (a1 + a2 > std::min(1.0, config.p_max_w() / p)) return out;
  PowerAllocation alloc;
  alloc.alpha = {a1, a2};
  for (double sl : bs_constraint_slacks(real, alloc, config))
    if (!(sl >= 0.0)) return out;
  out.feasible = true;
  out.coeffs = {a1, a2};
  out.objective_w = p * (a1 + a2);
  return out;
}

ClosedFormPoint rsu_min_power_point(const NetworkRealization& real,
                                    const SystemConfig& config, int m,
                                    double xi, const PowerAllocation& context,
                                    CrossInterferenceMode mode) {
  const double q = config.q_max_w();
  const double s = config.sigma_eps_sq;
  const double v = config.noise_w();
  const double th = config.rate_threshold();
  const double g1 = real.g_rsu_veh[m][0], g2 = real.g_rsu_veh[m][1];
  const double b1 = real.g_bd_veh[m][0] * real.g_rsu_bd[m];
  const double b2 = real.g_bd_veh[m][1] * real.g_rsu_bd[m];
  const double eff1 = g1 + xi * b1, eff2 = g2 + xi * b2;
  const double qc = cross_power_w(context, config, m, mode);
  const double i1 = real.g_cross[m][0] * qc;
  const double i2 = real.g_cross[m][1] * qc;
  ClosedFormPoint out;
  out.xi = xi;
  const double det =
      (eff1 - th * s) * (eff2 - th * s) - th * s * th * (eff2 + s);
  if (!(det > 0.0)) return out;
  const double r1 = th * (s * xi + i1 + v) / q;
  const double r2 = th * (s * xi + i2 + v) / q;
  double be1 = (r1 * (eff2 - th * s) + th * s * r2) / det * kClosedFormMargin;
  double be2 =
      (r1 * th * (eff2 + s) + r2 * (eff1 - th * s)) / det * kClosedFormMargin;
  if (!(be1 >= 0.0 && be2 >= 0.0)) return out;
  if (be1 + be2 > std::min(1.0, config.q_max_w() / q)) return out;
  PowerAllocation alloc = context;
  alloc.beta[m] = {be1, be2};
  alloc.xi[m] = xi;
  for (double sl : rsu_constraint_slacks(real, alloc, config, m, mode))
    if (!(sl >= 0.0)) return out;
  out.feasible = true;
  out.coeffs = {be1, be2};
  out.objective_w = q * (be1 + be2);
  return out;
}

ClosedFormPoint rsu_min_power_scan(const NetworkRealization& real,
                                   const SystemConfig& config, int m,
                                   int n_xi, const PowerAllocation& context,
                                   CrossInterferenceMode mode,
                                   bool xi_zero_only) {
  ClosedFormPoint best;
  if (xi_zero_only || n_xi <= 1)
    return rsu_min_power_point(real, config, m, 0.0, context, mode);
  for (int k = 0; k < n_xi; ++k) {
    const double xi = static_cast<double>(k) / (n_xi - 1);
    ClosedFormPoint cand =
        rsu_min_power_point(real, config, m, xi, context, mode);
    if (!cand.feasible) continue;
    if (!best.feasible || cand.objective_w < best.objective_w) best = cand;
  }
  return best;
}

Solution solve_bs_power(const NetworkRealization& real,
                        const SystemConfig& config,
                        const SolverConfig& solver_cfg) {
  Solution sol;
  const double p = config.p_max_w();
  const double g1 = real.g_bs_rsu[0], g2 = real.g_bs_rsu[1];

  ClosedFormPoint cf = bs_min_power_point(real, config);
  if (!cf.feasible) {
    sol.status = SolveStatus::infeasible;
    auto sl = bs_constraint_slacks(real, sol.alloc, config);
    sol.residuals.assign(sl.begin(), sl.end());
    return sol;
  }

  const std::array<double, 4> scales = {g1 * p, g2 * p, p, 1.0};
  std::array<double, 4> d;
  d.fill(solver_cfg.init_multiplier);
  PowerAllocation work;
  work.alpha = solver_cfg.init_alpha;

  double prev_obj = p * (work.alpha[0] + work.alpha[1]);
  double best_obj = std::numeric_limits<double>::infinity();
  std::array<double, 2> best_alpha{};
  bool have_best = false;
  bool converged = false;
  int flat = 0;
  int itr = 1;
  for (; itr <= solver_cfg.max_iters; ++itr) {
    const double step = step_size(solver_cfg, itr);
    const DualStateBS dual{d[0] / g1, d[1] / g2, d[2], p * d[3]};
    const auto grad = grad_alpha(real, work, dual, config,
                                 solver_cfg.grad_mode);
    work.alpha[0] = detail::primal_step(work.alpha[0], step, grad[0], p);
    work.alpha[1] = detail::primal_step(work.alpha[1], step, grad[1], p);
    const auto sl = bs_constraint_slacks(real, work, config);
    for (int j = 0; j < 4; ++j)
      d[j] = detail::dual_step(d[j], step, sl[j], scales[j]);
    const double min_sl = *std::min_element(sl.begin(), sl.end());
    const double obj = p * (work.alpha[0] + work.alpha[1]);
    if (solver_cfg.keep_trace)
      sol.trace.push_back({itr, obj, detail::pos(-min_sl), step});
    if (min_sl >= 0.0 && obj < best_obj) {
      best_obj = obj;
      best_alpha = work.alpha;
      have_best = true;
    }
    const double rel =
        std::abs(obj - prev_obj) / std::max(std::abs(prev_obj), 1e-12);
    if (rel < solver_cfg.tol_obj && min_sl >= -solver_cfg.tol_feas) {
      if (++flat >= kFlatWindow) {
        converged = true;
        break;
      }
    } else {
      flat = 0;
    }
    prev_obj = obj;
  }
  sol.iters_used = std::min(itr, solver_cfg.max_iters);

  std::array<double, 2> alpha = cf.coeffs;
  double obj = cf.objective_w;
  if (have_best && best_obj < obj) {
    alpha = best_alpha;
    obj = best_obj;
  }
  sol.alloc.alpha = alpha;
  sol.objective_w = obj;
  const auto sl = bs_constraint_slacks(real, sol.alloc, config);
  sol.residuals.assign(sl.begin(), sl.end());
  sol.feasible =
      *std::min_element(sl.begin(), sl.end()) >= -solver_cfg.tol_feas;
  sol.status = converged ? SolveStatus::converged : SolveStatus::not_converged;
  return sol;
}

Solution solve_rsu_power(const NetworkRealization& real,
                         const SystemConfig& config,
                         const SolverConfig& solver_cfg, int m,
                         const PowerAllocation* context) {
  Solution sol;
  const double q = config.q_max_w();
  const double g1 = real.g_rsu_veh[m][0], g2 = real.g_rsu_veh[m][1];
  const double b1 = real.g_bd_veh[m][0] * real.g_rsu_bd[m];
  const double b2 = real.g_bd_veh[m][1] * real.g_rsu_bd[m];
  const CrossInterferenceMode mode = solver_cfg.cross_mode;
  const PowerAllocation ctx = context ? *context : PowerAllocation{};

  ClosedFormPoint pre = rsu_min_power_scan(real, config, m, kPrecheckXiGrid,
                                           ctx, mode,
                                           solver_cfg.conventional);
  if (!pre.feasible) {
    sol.status = SolveStatus::infeasible;
    PowerAllocation zero = ctx;
    zero.beta[m] = {0.0, 0.0};
    zero.xi[m] = 0.0;
    auto sl = rsu_constraint_slacks(real, zero, config, m, mode);
    sol.residuals.assign(sl.begin(), sl.end());
    return sol;
  }

  const std::array<double, 5> scales = {q * (g1 + b1), q * (g2 + b2), q, 1.0,
                                        1.0};
  std::array<double, 5> d;
  d.fill(solver_cfg.init_multiplier);
  PowerAllocation work = ctx;
  work.beta[m] = solver_cfg.init_beta;
  work.xi[m] = solver_cfg.conventional ? 0.0 : solver_cfg.init_xi;

  double prev_obj = q * (work.beta[m][0] + work.beta[m][1]);
  double best_obj = std::numeric_limits<double>::infinity();
  std::array<double, 2> best_beta{};
  double best_xi = 0.0;
  bool have_best = false;
  bool converged = false;
  int flat = 0;
  int itr = 1;
  for (; itr <= solver_cfg.max_iters; ++itr) {
    const double step = step_size(solver_cfg, itr);
    DualStateRSU dual;
    dual.eta1[m] = d[0] / (g1 + b1);
    dual.eta2[m] = d[1] / (g2 + b2);
    dual.mu[m] = d[2];
    dual.zeta_sum[m] = q * d[3];
    dual.upsilon[m] = q * d[4];
    const auto grad =
        grad_beta_xi(real, work, dual, config, m, solver_cfg.grad_mode);
    work.beta[m][0] = detail::primal_step(work.beta[m][0], step, grad[0], q);
    work.beta[m][1] = detail::primal_step(work.beta[m][1], step, grad[1], q);
    if (!solver_cfg.conventional)
      work.xi[m] = detail::primal_step(work.xi[m], step, grad[2], q);
    const auto sl = rsu_constraint_slacks(real, work, config, m, mode);
    for (int j = 0; j < 5; ++j)
      d[j] = detail::dual_step(d[j], step, sl[j], scales[j]);
    const double min_sl = *std::min_element(sl.begin(), sl.end());
    const double obj = q * (work.beta[m][0] + work.beta[m][1]);
    if (solver_cfg.keep_trace)
      sol.trace.push_back({itr, obj, detail::pos(-min_sl), step});
    if (min_sl >= 0.0 && obj < best_obj) {
      best_obj = obj;
      best_beta = work.beta[m];
      best_xi = work.xi[m];
      have_best = true;
    }
    const double rel =
        std::abs(obj - prev_obj) / std::max(std::abs(prev_obj), 1e-12);
    if (rel < solver_cfg.tol_obj && min_sl >= -solver_cfg.tol_feas) {
      if (++flat >= kFlatWindow) {
        converged = true;
        break;
      }
    } else {
      flat = 0;
    }
    prev_obj = obj;
  }
  sol.iters_used = std::min(itr, solver_cfg.max_iters);

  // Polish: closed form at the iterate's reflection coefficient, improved by
  // a fine reflection grid, against the best feasible iterate.
  ClosedFormPoint chosen = rsu_min_power_point(
      real, config, m, solver_cfg.conventional ? 0.0 : work.xi[m], ctx, mode);
  ClosedFormPoint scan = rsu_min_power_scan(real, config, m, kPolishXiGrid,
                                            ctx, mode,
                                            solver_cfg.conventional);
  if (scan.feasible &&
      (!chosen.feasible || scan.objective_w < chosen.objective_w))
    chosen = scan;
  if (have_best && (!chosen.feasible || best_obj < chosen.objective_w)) {
    chosen.feasible = true;
    chosen.coeffs = best_beta;
    chosen.xi = best_xi;
    chosen.objective_w = best_obj;
  }
  if (!chosen.feasible) {
    sol.status = SolveStatus::infeasible;
    PowerAllocation zero = ctx;
    zero.beta[m] = {0.0, 0.0};
    zero.xi[m] = 0.0;
    auto fsl = rsu_constraint_slacks(real, zero, config, m, mode);
    sol.residuals.assign(fsl.begin(), fsl.end());
    return sol;
  }

  sol.alloc.beta[m] = chosen.coeffs;
  sol.alloc.xi[m] = chosen.xi;
  sol.objective_w = chosen.objective_w;
  PowerAllocation final_alloc = ctx;
  final_alloc.beta[m] = chosen.coeffs;
  final_alloc.xi[m] = chosen.xi;
  const auto sl = rsu_constraint_slacks(real, final_alloc, config, m, mode);
  sol.residuals.assign(sl.begin(), sl.end());
  sol.feasible =
      *std::min_element(sl.begin(), sl.end()) >= -solver_cfg.tol_feas;
  sol.status = converged ? SolveStatus::converged : SolveStatus::not_converged;
  return sol;
}

FullSolution solve_full(const NetworkRealization& real,
                        const SystemConfig& config,
                        const SolverConfig& solver_cfg) {
  FullSolution full;
  full.bs = solve_bs_power(real, config, solver_cfg);

  PowerAllocation alloc;
  alloc.alpha = full.bs.alloc.alpha;

  if (solver_cfg.cross_mode == CrossInterferenceMode::full_budget) {
    for (int m = 0; m < 2; ++m) {
      full.rsu[m] = solve_rsu_power(real, config, solver_cfg, m);
      alloc.beta[m] = full.rsu[m].alloc.beta[m];
      alloc.xi[m] = full.rsu[m].alloc.xi[m];
    }
  } else {
    // Coupled through the neighbor's allocated power: block-coordinate
    // rounds, starting from the conservative full-budget assumption.
    PowerAllocation ctx;
    ctx.beta = {{{0.5, 0.5}, {0.5, 0.5}}};
    double prev = std::numeric_limits<double>::infinity();
    for (int round = 0; round < kMaxCoordRounds; ++round) {
      for (int m = 0; m < 2; ++m) {
        full.rsu[m] = solve_rsu_power(real, config, solver_cfg, m, &ctx);
        ctx.beta[m] = full.rsu[m].alloc.beta[m];
        ctx.xi[m] = full.rsu[m].alloc.xi[m];
      }
      const double obj = full.rsu[0].objective_w + full.rsu[1].objective_w;
      if (std::abs(obj - prev) <=
          solver_cfg.tol_obj * std::max(1.0, std::abs(prev)))
        break;
      prev = obj;
    }
    alloc.beta = ctx.beta;
    alloc.xi = ctx.xi;
  }

  TrialMetrics tm;
  tm.feasible =
      full.bs.feasible && full.rsu[0].feasible && full.rsu[1].feasible;
  tm.alloc = alloc;
  tm.report = evaluate(real, alloc, config, solver_cfg.cross_mode);
  tm.bs_residuals = bs_constraint_slacks(real, alloc, config);
  for (int m = 0; m < 2; ++m)
    tm.rsu_residuals[m] =
        rsu_constraint_slacks(real, alloc, config, m, solver_cfg.cross_mode);
  tm.est_interference_total_w =
      estimation_interference(alloc, config).total_w;
  full.metrics = tm;
  return full;
}

}  // namespace v2x

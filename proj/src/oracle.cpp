#include "v2x/oracle.hpp"

#include <algorithm>
#include <tuple>

namespace v2x {

namespace {

bool all_nonneg(const double* sl, int n) {
  for (int i = 0; i < n; ++i)
    if (!(sl[i] >= 0.0)) return false;
  return true;
}

}  // namespace

OracleBS grid_search_bs(const NetworkRealization& real,
                        const SystemConfig& config, int n_grid) {
  OracleBS best;
  const double p = config.p_max_w();
  const double cap = std::min(1.0, config.p_max_w() / p);
  // with no estimation error the rate floor at RSU 2 only gets easier as
  // alpha_2 grows, so the first feasible alpha_2 is optimal for that alpha_1
  const bool monotone = config.sigma_eps_sq == 0.0;
  std::tuple<int, int> best_idx;
  PowerAllocation alloc;
  for (int i1 = 0; i1 < n_grid; ++i1) {
    const double a1 = static_cast<double>(i1) / (n_grid - 1);
    if (a1 > cap) break;
    for (int i2 = 0; i2 < n_grid; ++i2) {
      const double a2 = static_cast<double>(i2) / (n_grid - 1);
      if (a1 + a2 > cap) break;
      alloc.alpha = {a1, a2};
      const auto sl = bs_constraint_slacks(real, alloc, config);
      if (!all_nonneg(sl.data(), 4)) continue;
      const double obj = p * (a1 + a2);
      const std::tuple<int, int> idx{i1, i2};
      if (!best.feasible || obj < best.objective_w ||
          (obj == best.objective_w && idx < best_idx)) {
        best.feasible = true;
        best.alpha = {a1, a2};
        best.objective_w = obj;
        best_idx = idx;
      }
      if (monotone) break;
    }
  }
  return best;
}

OracleRSU grid_search_rsu(const NetworkRealization& real,
                          const SystemConfig& config, int n_grid, int m,
                          bool xi_zero_only) {
  OracleRSU best;
  const double q = config.q_max_w();
  const double cap = std::min(1.0, config.q_max_w() / q);
  const bool monotone = config.sigma_eps_sq == 0.0;
  const int n_xi = xi_zero_only ? 1 : n_grid;
  std::tuple<int, int, int> best_idx;
  PowerAllocation alloc;
  for (int ix = 0; ix < n_xi; ++ix) {
    alloc.xi[m] = xi_zero_only ? 0.0 : static_cast<double>(ix) / (n_grid - 1);
    for (int i1 = 0; i1 < n_grid; ++i1) {
      const double b1 = static_cast<double>(i1) / (n_grid - 1);
      if (b1 > cap) break;
      for (int i2 = 0; i2 < n_grid; ++i2) {
        const double b2 = static_cast<double>(i2) / (n_grid - 1);
        if (b1 + b2 > cap) break;
        alloc.beta[m] = {b1, b2};
        const auto sl = rsu_constraint_slacks(real, alloc, config, m,
                                              CrossInterferenceMode::full_budget);
        if (!all_nonneg(sl.data(), 5)) continue;
        const double obj = q * (b1 + b2);
        const std::tuple<int, int, int> idx{i1, i2, ix};
        if (!best.feasible || obj < best.objective_w ||
            (obj == best.objective_w && idx < best_idx)) {
          best.feasible = true;
          best.beta = {b1, b2};
          best.xi = alloc.xi[m];
          best.objective_w = obj;
          best_idx = idx;
        }
        if (monotone) break;
      }
    }
  }
  return best;
}

}  // namespace v2x

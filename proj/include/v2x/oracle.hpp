#pragma once

#include <array>

#include "v2x/channel.hpp"
#include "v2x/config.hpp"
#include "v2x/rates.hpp"

namespace v2x {

// Exhaustive grid-search minimizers used as ground truth when validating the
// iterative solver. They only depend on the rate/constraint evaluations,
// never on the solver.

struct OracleBS {
  bool feasible = false;
  std::array<double, 2> alpha{};
  double objective_w = 0.0;
};

struct OracleRSU {
  bool feasible = false;
  std::array<double, 2> beta{};
  double xi = 0.0;
  double objective_w = 0.0;
};

// Minimum BS transmit power over a uniform n_grid x n_grid coefficient grid.
// Ties resolve to the lexicographically smallest grid index.
OracleBS grid_search_bs(const NetworkRealization& real,
                        const SystemConfig& config, int n_grid = 401);

// Minimum RSU transmit power for RSU m over an n_grid^3 grid of
// (beta_1, beta_2, xi). xi_zero_only restricts the reflection grid to {0}.
OracleRSU grid_search_rsu(const NetworkRealization& real,
                          const SystemConfig& config, int n_grid, int m,
                          bool xi_zero_only = false);

}  // namespace v2x

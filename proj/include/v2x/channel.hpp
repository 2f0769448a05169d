#pragma once

#include <array>
#include <cstdint>

#include "v2x/config.hpp"

namespace v2x {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Euclidean distance floored at 1 m (path-loss validity limit).
double link_distance(const Vec2& a, const Vec2& b);

// Drawn node placement. BS sits at the origin; RSUs inside its disk,
// vehicles and one backscatter device inside each RSU's disk.
struct Topology {
  std::array<Vec2, 2> rsu_positions;
  std::array<std::array<Vec2, 2>, 2> vehicle_positions;  // [rsu][vehicle]
  std::array<Vec2, 2> bd_positions;
};

// Estimated channel power gains for every link the rate expressions use.
// The estimation error variance stays in SystemConfig; it is never folded
// into these values.
struct NetworkRealization {
  std::array<double, 2> g_bs_rsu{};                      // BS -> RSU m
  std::array<std::array<double, 2>, 2> g_rsu_veh{};      // RSU m -> vehicle i
  std::array<std::array<double, 2>, 2> g_bd_veh{};       // BD m -> vehicle i
  std::array<double, 2> g_rsu_bd{};                      // RSU m -> BD m
  std::array<std::array<double, 2>, 2> g_cross{};        // other RSU -> vehicle i of m
  std::uint64_t seed = 0;
};

// d^(-zeta); throws std::domain_error if d < 1.
double pathloss_gain(double d, double zeta);

Topology sample_topology(const SystemConfig& config, std::uint64_t seed);

// Unit-mean exponential fading on top of path loss, then index relabeling so
// that g_bs_rsu[0] >= g_bs_rsu[1] and g_rsu_veh[m][0] >= g_rsu_veh[m][1].
// Relabeling swaps whole node records, so every gain keeps its physical link.
NetworkRealization sample_channels(const Topology& topo,
                                   const SystemConfig& config,
                                   std::uint64_t seed);

namespace detail {
// Draw order identical to sample_channels but without the relabeling step.
NetworkRealization sample_channels_raw(const Topology& topo,
                                       const SystemConfig& config,
                                       std::uint64_t seed);
}  // namespace detail

}  // namespace v2x

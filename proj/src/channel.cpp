#include "v2x/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "v2x/rng.hpp"

namespace v2x {

namespace {
constexpr std::uint64_t kTopologySalt = 0x746f706f6c6f6779ULL;
constexpr std::uint64_t kChannelSalt = 0x6368616e6e656c73ULL;
}  // namespace

double link_distance(const Vec2& a, const Vec2& b) {
  double d = std::hypot(a.x - b.x, a.y - b.y);
  return d < 1.0 ? 1.0 : d;
}

double pathloss_gain(double d, double zeta) {
  if (d < 1.0) throw std::domain_error("pathloss_gain: distance below 1 m");
  return std::pow(d, -zeta);
}

Topology sample_topology(const SystemConfig& config, std::uint64_t seed) {
  Rng rng(mix_seed(seed, kTopologySalt));
  Topology topo;
  for (int m = 0; m < 2; ++m) {
    auto p = rng.disk(config.bs_radius_m, 0.0, 0.0);
    topo.rsu_positions[m] = {p[0], p[1]};
  }
  for (int m = 0; m < 2; ++m) {
    const Vec2& c = topo.rsu_positions[m];
    for (int i = 0; i < 2; ++i) {
      auto p = rng.disk(config.rsu_radius_m, c.x, c.y);
      topo.vehicle_positions[m][i] = {p[0], p[1]};
    }
    auto p = rng.disk(config.rsu_radius_m, c.x, c.y);
    topo.bd_positions[m] = {p[0], p[1]};
  }
  return topo;
}

namespace detail {

NetworkRealization sample_channels_raw(const Topology& topo,
                                       const SystemConfig& config,
                                       std::uint64_t seed) {
  Rng rng(mix_seed(seed, kChannelSalt));
  const double zeta = config.pathloss_exp;
  const Vec2 bs{0.0, 0.0};
  auto gain = [&](const Vec2& a, const Vec2& b) {
    return rng.exponential() * pathloss_gain(link_distance(a, b), zeta);
  };

  NetworkRealization real;
  real.seed = seed;
  for (int m = 0; m < 2; ++m)
    real.g_bs_rsu[m] = gain(bs, topo.rsu_positions[m]);
  for (int m = 0; m < 2; ++m) {
    for (int i = 0; i < 2; ++i)
      real.g_rsu_veh[m][i] =
          gain(topo.rsu_positions[m], topo.vehicle_positions[m][i]);
    for (int i = 0; i < 2; ++i)
      real.g_bd_veh[m][i] =
          gain(topo.bd_positions[m], topo.vehicle_positions[m][i]);
    real.g_rsu_bd[m] = gain(topo.rsu_positions[m], topo.bd_positions[m]);
    for (int i = 0; i < 2; ++i)
      real.g_cross[m][i] =
          gain(topo.rsu_positions[1 - m], topo.vehicle_positions[m][i]);
  }
  return real;
}

}  // namespace detail

NetworkRealization sample_channels(const Topology& topo,
                                   const SystemConfig& config,
                                   std::uint64_t seed) {
  NetworkRealization real = detail::sample_channels_raw(topo, config, seed);

  if (real.g_bs_rsu[0] < real.g_bs_rsu[1]) {
    std::swap(real.g_bs_rsu[0], real.g_bs_rsu[1]);
    std::swap(real.g_rsu_veh[0], real.g_rsu_veh[1]);
    std::swap(real.g_bd_veh[0], real.g_bd_veh[1]);
    std::swap(real.g_rsu_bd[0], real.g_rsu_bd[1]);
    std::swap(real.g_cross[0], real.g_cross[1]);
  }
  for (int m = 0; m < 2; ++m) {
    if (real.g_rsu_veh[m][0] < real.g_rsu_veh[m][1]) {
      std::swap(real.g_rsu_veh[m][0], real.g_rsu_veh[m][1]);
      std::swap(real.g_bd_veh[m][0], real.g_bd_veh[m][1]);
      std::swap(real.g_cross[m][0], real.g_cross[m][1]);
    }
  }
  return real;
}

}  // namespace v2x

#include "v2x/rates.hpp"

#include <algorithm>
#include <cmath>

namespace v2x {

namespace {

// Power the neighboring RSU contributes as interference.
double cross_power_w(const PowerAllocation& alloc, const SystemConfig& config,
                     int m, CrossInterferenceMode mode) {
  if (mode == CrossInterferenceMode::full_budget) return config.q_max_w();
  int other = 1 - m;
  return config.q_max_w() * (alloc.beta[other][0] + alloc.beta[other][1]);
}

}  // namespace

std::array<double, 2> sinr_first_slot(const NetworkRealization& real,
                                      const PowerAllocation& alloc,
                                      const SystemConfig& config) {
  const double p = config.p_max_w();
  const double s = config.sigma_eps_sq;
  const double v = config.noise_w();
  const double asum = alloc.alpha[0] + alloc.alpha[1];
  const double est = p * s * asum;
  double g1 = real.g_bs_rsu[0] * p * alloc.alpha[0] / (est + v);
  double g2 = real.g_bs_rsu[1] * p * alloc.alpha[1] /
              (real.g_bs_rsu[1] * p * alloc.alpha[0] + est + v);
  return {g1, g2};
}

std::array<std::array<double, 2>, 2> sinr_second_slot(
    const NetworkRealization& real, const PowerAllocation& alloc,
    const SystemConfig& config, CrossInterferenceMode mode) {
  const double q = config.q_max_w();
  const double s = config.sigma_eps_sq;
  const double v = config.noise_w();
  std::array<std::array<double, 2>, 2> out{};
  for (int m = 0; m < 2; ++m) {
    const double b1 = alloc.beta[m][0];
    const double b2 = alloc.beta[m][1];
    const double xi = alloc.xi[m];
    const double qc = cross_power_w(alloc, config, m, mode);
    const double est = s * (q * (b1 + b2) + xi);
    const double bsc = real.g_rsu_bd[m];
    const double eff1 = real.g_rsu_veh[m][0] + xi * real.g_bd_veh[m][0] * bsc;
    const double eff2 = real.g_rsu_veh[m][1] + xi * real.g_bd_veh[m][1] * bsc;
    out[m][0] =
        q * b1 * eff1 / (est + real.g_cross[m][0] * qc + v);
    out[m][1] =
        q * b2 * eff2 /
        (q * b1 * eff2 + est + real.g_cross[m][1] * qc + v);
  }
  return out;
}

double rate(double gamma, double t) { return t * std::log2(1.0 + gamma); }

std::pair<std::array<std::array<double, 2>, 2>, double> end_to_end_and_sum(
    const std::array<double, 2>& c_rsu,
    const std::array<std::array<double, 2>, 2>& c_veh,
    const SystemConfig& config) {
  std::array<std::array<double, 2>, 2> e2e{};
  double total = 0.0;
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < 2; ++i) {
      e2e[m][i] = 0.5 * std::min(c_rsu[m], c_veh[m][i]);
      total += e2e[m][i];
    }
  return {e2e, config.bandwidth_hz * total};
}

double total_power(const PowerAllocation& alloc, const SystemConfig& config) {
  double w = config.p_max_w() * (alloc.alpha[0] + alloc.alpha[1]);
  for (int m = 0; m < 2; ++m)
    w += config.q_max_w() * (alloc.beta[m][0] + alloc.beta[m][1]);
  return w + config.circuit_w();
}

double energy_efficiency(const NetworkRealization& real,
                         const PowerAllocation& alloc,
                         const SystemConfig& config,
                         CrossInterferenceMode mode) {
  return evaluate(real, alloc, config, mode).ee_bits_per_joule;
}

EstimationInterference estimation_interference(const PowerAllocation& alloc,
                                               const SystemConfig& config) {
  const double s = config.sigma_eps_sq;
  EstimationInterference est;
  est.bs_w = config.p_max_w() * s * (alloc.alpha[0] + alloc.alpha[1]);
  est.total_w = est.bs_w;
  for (int m = 0; m < 2; ++m) {
    est.rsu_w[m] =
        s * (config.q_max_w() * (alloc.beta[m][0] + alloc.beta[m][1]) +
             alloc.xi[m]);
    est.total_w += est.rsu_w[m];
  }
  return est;
}

RateReport evaluate(const NetworkRealization& real,
                    const PowerAllocation& alloc, const SystemConfig& config,
                    CrossInterferenceMode mode) {
  RateReport rep;
  rep.gamma_rsu = sinr_first_slot(real, alloc, config);
  rep.gamma_veh = sinr_second_slot(real, alloc, config, mode);
  for (int m = 0; m < 2; ++m) {
    rep.c_rsu[m] = rate(rep.gamma_rsu[m], config.t1);
    for (int i = 0; i < 2; ++i)
      rep.c_veh[m][i] = rate(rep.gamma_veh[m][i], config.t2);
  }
  auto [e2e, sum_bps] = end_to_end_and_sum(rep.c_rsu, rep.c_veh, config);
  rep.e2e_rate = e2e;
  rep.sum_rate_bps = sum_bps;
  rep.total_power_w = total_power(alloc, config);
  rep.ee_bits_per_joule = rep.sum_rate_bps / rep.total_power_w;
  return rep;
}

std::array<double, 4> bs_constraint_slacks(const NetworkRealization& real,
                                           const PowerAllocation& alloc,
                                           const SystemConfig& config) {
  const double p = config.p_max_w();
  const double s = config.sigma_eps_sq;
  const double v = config.noise_w();
  const double th = config.rate_threshold();
  const double a1 = alloc.alpha[0], a2 = alloc.alpha[1];
  const double asum = a1 + a2;
  const double g1 = real.g_bs_rsu[0], g2 = real.g_bs_rsu[1];
  return {
      g1 * p * a1 - th * (p * s * asum + v),
      g2 * p * a2 - th * (g2 * p * a1 + p * s * asum + v),
      config.p_max_w() - p * asum,
      1.0 - asum,
  };
}

std::array<double, 5> rsu_constraint_slacks(const NetworkRealization& real,
                                            const PowerAllocation& alloc,
                                            const SystemConfig& config, int m,
                                            CrossInterferenceMode mode) {
  const double q = config.q_max_w();
  const double s = config.sigma_eps_sq;
  const double v = config.noise_w();
  const double th = config.rate_threshold();
  const double b1 = alloc.beta[m][0], b2 = alloc.beta[m][1];
  const double bsum = b1 + b2;
  const double xi = alloc.xi[m];
  const double qc = cross_power_w(alloc, config, m, mode);
  const double est = s * (q * bsum + xi);
  const double bsc = real.g_rsu_bd[m];
  const double eff1 = real.g_rsu_veh[m][0] + xi * real.g_bd_veh[m][0] * bsc;
  const double eff2 = real.g_rsu_veh[m][1] + xi * real.g_bd_veh[m][1] * bsc;
  return {
      q * b1 * eff1 - th * (est + real.g_cross[m][0] * qc + v),
      q * b2 * eff2 -
          th * (q * b1 * eff2 + est + real.g_cross[m][1] * qc + v),
      config.q_max_w() - q * bsum,
      1.0 - bsum,
      1.0 - xi,
  };
}

}  // namespace v2x
